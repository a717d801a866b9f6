"""Big-integer backend: gmpy2 when installed, plain ints otherwise."""

from math import gcd as _pygcd


def newton_icbrt(n: int) -> int:
    """floor(n ** (1/3)) for n >= 0, by integer Newton iteration."""
    if n < 0:
        raise ValueError("icbrt of negative number")
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            break
        x = y
    while x * x * x > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


try:
    import gmpy2

    Z = gmpy2.mpz
    gcd = gmpy2.gcd

    def icbrt(n):
        """floor(n ** (1/3)) for n >= 0."""
        return Z(gmpy2.iroot(Z(n), 3)[0])

    BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Z = int
    gcd = _pygcd
    icbrt = newton_icbrt
    BACKEND = "int"
