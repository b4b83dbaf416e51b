import math

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI_SQ = (3 - math.sqrt(5)) / 2


def golden_section_max(f, a, b, tol=1e-6):
    """Maximize a unimodal ``f`` on ``[a, b]``.

    Returns ``(x, f(x), iterations)`` where ``x`` is the midpoint of the final
    bracket, whose width is at most ``tol``.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x), 0

    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI_SQ * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)
    for _ in range(n - 1):
        if yc > yd:
            b, d, yd = d, c, yc
            h *= INV_PHI
            c = a + INV_PHI_SQ * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= INV_PHI
            d = a + INV_PHI * h
            yd = f(d)

    lo, hi = (a, d) if yc > yd else (c, b)
    x = 0.5 * (lo + hi)
    fx = f(x)
    # the midpoint can sit a hair below the best probe when the peak is flat
    for xp, fp in ((c, yc), (d, yd)):
        if fp > fx:
            x, fx = xp, fp
    return x, fx, n


def sign_changes(values):
    """Number of strict sign changes in a sequence, ignoring exact zeros."""
    s = [v for v in (math.copysign(1.0, x) if x != 0 else 0.0 for x in values) if v != 0]
    return sum(1 for p, q in zip(s, s[1:]) if p != q)
