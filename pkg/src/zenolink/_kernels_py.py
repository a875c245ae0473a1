"""Pure-Python computation kernels.

Reference implementations of the hot loops. The compiled extension
(zenolink._kernels) mirrors these function by function and must produce
bit-identical IEEE-754 results, so keep expression order in sync when
editing either file.
"""

BACKEND = "python"


def chain_product(c, s, dl, dr, n):
    """Entries of R·(D·R)^(n-1) with R = [[c, -s], [s, c]], D = diag(dl, dr).

    The rightmost factor acts first, so this is n splitter stages with a
    diagonal attenuation between consecutive stages. n = 1 returns R exactly.
    """
    k11 = dl * c
    k12 = dl * (-s)
    k21 = dr * s
    k22 = dr * c
    a11 = c
    a12 = -s
    a21 = s
    a22 = c
    for _ in range(n - 1):
        b11 = a11 * k11 + a12 * k21
        b12 = a11 * k12 + a12 * k22
        b21 = a21 * k11 + a22 * k21
        b22 = a21 * k12 + a22 * k22
        a11 = b11
        a12 = b12
        a21 = b21
        a22 = b22
    return a11, a12, a21, a22


def outer_scan(c, s, dl, dr, m):
    """Scan of the outer chain: m splitter stages with gap diag(dl, dr).

    Returns (a11, a21, feeds) where a11 and a21 are the first-column entries
    of the full product and feeds[i] is the lower-left entry after stage
    i + 1, i.e. the amplitude handed to gap i + 1 before its attenuation
    (m - 1 entries).
    """
    k11 = dl * c
    k12 = dl * (-s)
    k21 = dr * s
    k22 = dr * c
    a11 = c
    a12 = -s
    a21 = s
    a22 = c
    feeds = []
    for _ in range(m - 1):
        feeds.append(a21)
        b11 = a11 * k11 + a12 * k21
        b12 = a11 * k12 + a12 * k22
        b21 = a21 * k11 + a22 * k21
        b22 = a21 * k12 + a22 * k22
        a11 = b11
        a12 = b12
        a21 = b21
        a22 = b22
    return a11, a21, feeds


def mat_power(a11, a12, a21, a22, k):
    """k-fold product of a 2x2 matrix with itself. k = 0 gives the identity."""
    r11 = 1.0
    r12 = 0.0
    r21 = 0.0
    r22 = 1.0
    for _ in range(k):
        b11 = r11 * a11 + r12 * a21
        b12 = r11 * a12 + r12 * a22
        b21 = r21 * a11 + r22 * a21
        b22 = r21 * a12 + r22 * a22
        r11 = b11
        r12 = b12
        r21 = b21
        r22 = b22
    return r11, r12, r21, r22


def propagate_fold(code, mode_a, mode_b, x, y, mode_count, det_count, amplitude):
    """Fold an input amplitude through an encoded element sequence.

    Element codes:
      0  splitter on (mode_a, mode_b) with x = cos(theta), y = sin(theta)
      1  attenuator on mode_a, loss group mode_b, x = kappa, y = sqrt(1 - kappa)
      2  block on mode_a (total absorber in the transmission channel)
      3  detector tap on mode_a into detector index mode_b; x is nonzero when
         the tapped segment lies in the transmission channel

    Group index 2 is the transmission-channel group; pre-loss probability
    entering any channel segment (attenuator, block, or channel-side tap)
    accumulates into `entering`.

    Returns (amps, detector_amps, loss_by_group, blocked, entering).
    """
    amps = [0.0] * mode_count
    amps[0] = amplitude
    det = [0.0] * det_count
    loss = [0.0, 0.0, 0.0]
    blocked = 0.0
    entering = 0.0
    for i in range(len(code)):
        op = code[i]
        ia = mode_a[i]
        if op == 0:
            ib = mode_b[i]
            c = x[i]
            s = y[i]
            a = amps[ia]
            b = amps[ib]
            amps[ia] = c * a - s * b
            amps[ib] = s * a + c * b
        elif op == 1:
            g = mode_b[i]
            v = amps[ia]
            if g == 2:
                entering += v * v
            loss[g] += x[i] * v * v
            amps[ia] = v * y[i]
        elif op == 2:
            v = amps[ia]
            entering += v * v
            blocked += v * v
            amps[ia] = 0.0
        else:
            v = amps[ia]
            if x[i] != 0.0:
                entering += v * v
            det[mode_b[i]] += v
            amps[ia] = 0.0
    return amps, det, loss, blocked, entering
