"""Normal-ordering coefficients for one canonical pair [V, R] = 1."""

from functools import lru_cache


@lru_cache(maxsize=None)
def weyl_mode_product(b: int, c: int) -> tuple:
    """Expand ``V**b R**c`` as ``sum mult * R**(c-k) V**(b-k)``.

    Returns ``(r_power, v_power, mult)`` triples; ``mult = C(b,k) C(c,k) k!``.
    """
    out = []
    coef = 1
    k = 0
    while k <= b and k <= c:
        out.append((c - k, b - k, coef))
        coef = coef * (b - k) * (c - k) // (k + 1)
        k += 1
    return tuple(out)
