"""Classical integer routines used around the quantum order finder."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .config import DomainError


class Failure(str, enum.Enum):
    """Reasons a single factoring attempt can fail."""

    ODD_PERIOD = "odd_period"
    MINUS_ONE = "minus_one_case"
    BAD_Y = "bad_y"
    Y_ZERO = "y_zero"


def gcd(a: int, b: int) -> int:
    """Euclid's algorithm; result is non-negative."""
    a, b = abs(int(a)), abs(int(b))
    if a == 0 and b == 0:
        raise DomainError("gcd(0, 0) is undefined")
    while b:
        a, b = b, a % b
    return a


def modpow(a: int, x: int, N: int) -> int:
    """``a**x mod N`` by right-to-left square-and-multiply."""
    if N < 2:
        raise DomainError(f"modulus must be >= 2, got {N}")
    if x < 0:
        raise DomainError(f"exponent must be >= 0, got {x}")
    result, base = 1, a % N
    while x:
        if x & 1:
            result = result * base % N
        base = base * base % N
        x >>= 1
    return result


def brute_force_period(a: int, N: int) -> int:
    """Smallest ``r >= 1`` with ``a**r = 1 (mod N)``, by direct iteration."""
    if N < 2:
        raise DomainError(f"modulus must be >= 2, got {N}")
    if gcd(a, N) != 1:
        raise DomainError(f"a={a} is not coprime with N={N}")
    v, r = a % N, 1
    while v != 1 % N:
        v = v * a % N
        r += 1
    return r


@dataclass
class ContinuedFraction:
    partial_quotients: list[int] = field(default_factory=list)
    convergents: list[tuple[int, int]] = field(default_factory=list)


def continued_fraction(numerator: int, denominator: int, max_denominator: int | None = None) -> ContinuedFraction:
    """Expand ``numerator/denominator`` and list its convergents.

    Expansion stops after the first convergent whose denominator exceeds
    ``max_denominator`` (that convergent is still included) or when the
    fraction is exhausted.
    """
    if denominator <= 0 or not 0 <= numerator < denominator:
        raise DomainError(f"need 0 <= numerator < denominator, got {numerator}/{denominator}")
    cf = ContinuedFraction()
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    num, den = numerator, denominator
    while den:
        a, rem = divmod(num, den)
        cf.partial_quotients.append(a)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        cf.convergents.append((p, q))
        if max_denominator is not None and q > max_denominator:
            break
        num, den = den, rem
    return cf


def prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def reduce_to_order(a: int, period: int, N: int) -> int:
    """Smallest divisor ``r`` of ``period`` with ``a**r = 1 (mod N)``."""
    if period < 1 or modpow(a, period, N) != 1:
        raise DomainError(f"{period} is not a period of {a} mod {N}")
    r = period
    for p in prime_factors(period):
        while r % p == 0 and modpow(a, r // p, N) == 1:
            r //= p
    return r


# ---------------------------------------------------------------------------
# screening


_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with a witness set that is deterministic below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def integer_root(n: int, k: int) -> int:
    """Largest ``b`` with ``b**k <= n``."""
    if k == 1:
        return n
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


def perfect_power_base(n: int) -> int | None:
    """Smallest ``b > 1`` with ``n = b**k`` for some ``k >= 2``, else None."""
    for k in range(n.bit_length(), 1, -1):
        b = integer_root(n, k)
        if b > 1 and b**k == n:
            return b
    return None


def small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, flag in enumerate(sieve) if flag]


@dataclass(frozen=True)
class ScreenResult:
    verdict: str  # even | prime | prime_power | trivial_gcd | eligible
    factor: int | None = None


def screen(N: int, trial_limit: int | None = None) -> ScreenResult:
    """Classify ``N`` before any quantum work.

    ``trial_limit`` enables a trial-division pass by primes up to that
    bound; it is off by default so that small textbook semiprimes such as
    15 and 21 still reach the order finder.
    """
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    if is_probable_prime(N):
        return ScreenResult("prime")
    if N % 2 == 0:
        return ScreenResult("even", 2)
    base = perfect_power_base(N)
    if base is not None:
        return ScreenResult("prime_power", base)
    if trial_limit:
        for p in small_primes(trial_limit):
            if p * p > N:
                break
            if N % p == 0:
                return ScreenResult("trivial_gcd", p)
    return ScreenResult("eligible")


def factors_from_period(a: int, r: int, N: int) -> tuple[int, int] | Failure:
    """Turn the order ``r`` of ``a`` mod ``N`` into two nontrivial factors.

    Succeeds when ``r`` is even and ``a**(r/2) != -1 (mod N)``; otherwise
    returns the matching :class:`Failure`.
    """
    if gcd(a, N) != 1:
        raise DomainError(f"a={a} is not coprime with N={N}")
    if r < 1 or modpow(a, r, N) != 1:
        raise DomainError(f"r={r} is not a period of {a} mod {N}")
    if r % 2:
        return Failure.ODD_PERIOD
    half = modpow(a, r // 2, N)
    if half == 1:
        raise DomainError(f"r={r} is not the order of {a} mod {N} (r/2 is a period)")
    if half == N - 1:
        return Failure.MINUS_ONE
    f1, f2 = gcd(half - 1, N), gcd(half + 1, N)
    return (min(f1, f2), max(f1, f2))
