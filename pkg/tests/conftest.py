from math import isqrt


def trial_factor(n: int) -> dict[int, int]:
    """Plain trial division; the reference every sieve is checked against."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def kernel(n: int) -> int:
    """Squarefree part by stripping square divisors."""
    k = 1
    for p, e in trial_factor(n).items():
        if e % 2:
            k *= p
    return k


def is_square_int(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n
