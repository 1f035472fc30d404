"""Canonical simplification.

An expression is converted to a *polynomial* over atoms: a mapping from
monomials (sorted tuples of ``(base, exponent)`` with rational exponents) to
rational coefficients.  Atoms are coordinates, parameters, opaque function
symbols, antiderivative nodes, transcendental kernels ``exp/log/sin/cos`` with
canonical arguments, positive rational constants raised to fractional powers,
and irreducible composite bases (sums) carrying negative or fractional
exponents.

Normalisation rules applied while building the polynomial:

* exponentials in one monomial merge into a single ``exp`` of the summed
  argument, and ``exp(0) = 1``;
* a sign symbol ε keeps only its exponent parity (ε² = 1, 1/ε = ε);
* ``cos(u)^n`` with ``n ≥ 2`` becomes ``cos(u)^(n-2)·(1 - sin(u)^2)``, which
  implements the targeted rewrite ``sin² + cos² = 1``;
* ``sin``/``cos`` of a negatively-led argument use odd/even symmetry;
* composite bases raised to positive integer powers are expanded;
* negative powers of sums are content-normalised so that equal denominators
  are recognised.

The final step puts the result over a common denominator of its composite
factors and cancels exact polynomial factors, returning a ``Sum`` (or a
``Product`` of a numerator sum with denominator powers).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .expr import (
    Antideriv,
    Apply,
    Const,
    Coordinate,
    Expr,
    Opaque,
    Param,
    Power,
    Product,
    Sum,
)

Mono = tuple  # tuple[tuple[Expr, Fraction], ...]
Poly = dict  # dict[Mono, Fraction]

_ONE_MONO: Mono = ()
_MAX_DIV_STEPS = 20000


# ---------------------------------------------------------------------------
# small helpers


def _mono_key(m: Mono) -> tuple:
    return tuple((b.sort_key, e) for b, e in m)


def _is_composite(b: Expr) -> bool:
    return isinstance(b, (Sum, Product, Power))


def _is_exp(b: Expr) -> bool:
    return isinstance(b, Apply) and b.fn == "exp"


def _prime_factors(c: Fraction, limit: int = 10**6) -> dict | None:
    """Prime factorisation of a positive rational (negative multiplicities for
    the denominator); ``None`` when a factor exceeds ``limit``."""
    out: dict = {}
    for n, sign in ((c.numerator, 1), (c.denominator, -1)):
        p = 2
        while p * p <= n:
            if p > limit:
                return None
            while n % p == 0:
                out[p] = out.get(p, 0) + sign
                n //= p
            p += 1 if p == 2 else 2
        if n > 1:
            if n > limit:
                return None
            out[n] = out.get(n, 0) + sign
    return out


def _padd(acc: Poly, other: Poly, scale: Fraction = Fraction(1)) -> None:
    for m, c in other.items():
        v = acc.get(m, 0) + c * scale
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


def _mono_mul_raw(a: Mono, b: Mono) -> dict:
    d: dict = {}
    for base, e in a:
        d[base] = d.get(base, 0) + e
    for base, e in b:
        d[base] = d.get(base, 0) + e
    return d


def _pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return {}
    if len(p) == 1 and _ONE_MONO in p:
        c = p[_ONE_MONO]
        return {m: v * c for m, v in q.items()}
    if len(q) == 1 and _ONE_MONO in q:
        c = q[_ONE_MONO]
        return {m: v * c for m, v in p.items()}
    out: Poly = {}
    for ma, ca in p.items():
        for mb, cb in q.items():
            _padd(out, _normalize(_mono_mul_raw(ma, mb)), ca * cb)
    return out


def _pint_pow(p: Poly, n: int) -> Poly:
    result: Poly = {_ONE_MONO: Fraction(1)}
    base = p
    while n:
        if n & 1:
            result = _pmul(result, base)
        n >>= 1
        if n:
            base = _pmul(base, base)
    return result


def _const_poly(c) -> Poly:
    c = Fraction(c)
    return {_ONE_MONO: c} if c else {}


def _atom_poly(b: Expr, e=Fraction(1)) -> Poly:
    return _normalize({b: Fraction(e)})


# ---------------------------------------------------------------------------
# monomial normalisation


def _normalize(d: dict) -> Poly:
    """Normalise a raw monomial ``{base: exponent}`` into a polynomial."""
    key = tuple(sorted(((b, Fraction(e)) for b, e in d.items() if e), key=lambda t: t[0].sort_key))
    return dict(_normalize_cached(key))


@lru_cache(maxsize=200_000)
def _normalize_cached(items: tuple) -> tuple:
    coeff = Fraction(1)
    atoms: dict = {}
    exp_terms: list = []
    expand: list = []  # polynomials to multiply in
    for b, e in items:
        if isinstance(b, Const):
            c = b.value
            if c == 0:
                if e < 0:
                    raise ZeroDivisionError("division by zero")
                return ()
            if e.denominator == 1:
                coeff *= c ** int(e)
                continue
            if c < 0:
                atoms[b] = atoms.get(b, 0) + e
                continue
            # positive rational base with fractional exponent: split into primes
            factors = _prime_factors(c)
            if factors is None:
                atoms[b] = atoms.get(b, 0) + e
                continue
            for prime, mult in factors.items():
                pe = e * mult
                whole = pe.numerator // pe.denominator
                coeff *= Fraction(prime) ** whole
                rest = pe - whole
                if rest:
                    pb = Const(prime)
                    atoms[pb] = atoms.get(pb, 0) + rest
            continue
        if isinstance(b, Param) and b.sign:
            if e.denominator == 1:
                if int(e) % 2:
                    atoms[b] = atoms.get(b, 0) + 1
            else:
                atoms[b] = atoms.get(b, 0) + e
            continue
        if _is_exp(b):
            exp_terms.append((b.arg, e))
            continue
        if isinstance(b, Apply) and b.fn == "cos" and e.denominator == 1 and e >= 2:
            n = int(e)
            if n % 2:
                atoms[b] = atoms.get(b, 0) + 1
            s = Apply("sin", b.arg)
            expand.append(_pint_pow({_ONE_MONO: Fraction(1), ((s, Fraction(2)),): Fraction(-1)}, n // 2))
            continue
        if _is_composite(b) and e.denominator == 1 and e > 0:
            expand.append(_pint_pow(to_poly(b), int(e)))
            continue
        atoms[b] = atoms.get(b, 0) + e
    # fold parity of sign symbols and whole powers of radical constants
    for b in list(atoms):
        e = atoms[b]
        if isinstance(b, Const) and b.value > 0:
            whole = e.numerator // e.denominator
            if whole:
                coeff *= b.value**whole
                e = e - whole
                atoms[b] = e
            if e == 0:
                del atoms[b]
            continue
        if isinstance(b, Param) and b.sign and e.denominator == 1:
            if int(e) % 2:
                atoms[b] = Fraction(1)
            else:
                del atoms[b]
        elif e == 0:
            del atoms[b]
    if exp_terms:
        arg = simplify(Sum(tuple(Product((Const(e), a)) for a, e in exp_terms)))
        if not (isinstance(arg, Const) and arg.value == 0):
            atoms[Apply("exp", arg)] = Fraction(1)
    mono = tuple(sorted(atoms.items(), key=lambda t: t[0].sort_key))
    poly: Poly = {mono: coeff}
    for p in expand:
        poly = _pmul(poly, p)
    return tuple(poly.items())


# ---------------------------------------------------------------------------
# conversion of expressions to polynomials


def to_poly(e: Expr) -> Poly:
    return dict(_to_poly_cached(e))


@lru_cache(maxsize=200_000)
def _to_poly_cached(e: Expr) -> tuple:
    return tuple(_to_poly(e).items())


def _to_poly(e: Expr) -> Poly:
    if isinstance(e, Const):
        return _const_poly(e.value)
    if isinstance(e, (Coordinate, Param, Opaque)):
        return {((e, Fraction(1)),): Fraction(1)}
    if isinstance(e, Sum):
        acc: Poly = {}
        for t in e.terms:
            _padd(acc, to_poly(t))
        return acc
    if isinstance(e, Product):
        acc = {_ONE_MONO: Fraction(1)}
        for f in e.factors:
            acc = _pmul(acc, to_poly(f))
            if not acc:
                return {}
        return acc
    if isinstance(e, Power):
        return _power(to_poly(e.base), e.exponent)
    if isinstance(e, Apply):
        return _kernel(e.fn, simplify(e.arg))
    if isinstance(e, Antideriv):
        return _antideriv(e)
    raise TypeError(f"unknown node {type(e).__name__}")


def _antideriv(e: Antideriv) -> Poly:
    from .expr import Coordinate as _C, depends_on

    integrand = simplify(e.integrand)
    if isinstance(integrand, Const) and integrand.value == 0:
        return {}
    if not depends_on(integrand, e.var):
        return _pmul(to_poly(integrand), to_poly(Sum((_C(e.var), Const(-e.lower)))))
    return {((Antideriv(integrand, e.var, e.lower), Fraction(1)),): Fraction(1)}


def is_negative(e: Expr) -> bool:
    """Whether a canonical expression has a negative leading coefficient."""
    if isinstance(e, Const):
        return e.value < 0
    if isinstance(e, Product):
        return is_negative(e.factors[0])
    if isinstance(e, Sum):
        return is_negative(e.terms[0])
    return False


def _negate(e: Expr) -> Expr:
    return simplify(Product((Const(-1), e)))


def _kernel(fn: str, arg: Expr) -> Poly:
    zero = isinstance(arg, Const) and arg.value == 0
    if fn == "exp":
        if zero:
            return _const_poly(1)
        return _atom_poly(Apply("exp", arg))
    if fn == "log":
        if isinstance(arg, Const) and arg.value == 1:
            return {}
        if _is_exp(arg):
            return to_poly(arg.arg)
        return _atom_poly(Apply("log", arg))
    if fn == "sin":
        if zero:
            return {}
        if is_negative(arg):
            return {m: -c for m, c in _atom_poly(Apply("sin", _negate(arg))).items()}
        return _atom_poly(Apply("sin", arg))
    if fn == "cos":
        if zero:
            return _const_poly(1)
        if is_negative(arg):
            arg = _negate(arg)
        return _atom_poly(Apply("cos", arg))
    if fn == "sqrt":
        return _power(to_poly(arg), Fraction(1, 2))
    raise ValueError(fn)


def _content(p: Poly) -> tuple[Fraction, dict, Poly]:
    """Split ``p`` as ``c · m · q`` with ``q`` primitive and leading coefficient 1.

    ``m`` holds, for every freely shiftable atom, its minimal exponent over all
    terms (absent counts as 0), so ``q`` has no negative powers of such atoms.
    """
    terms = sorted(p.items(), key=lambda t: _mono_key(t[0]))
    lead = terms[0][1]
    shiftable = {
        b
        for m in p
        for b, _ in m
        if not _is_exp(b) and not (isinstance(b, Param) and b.sign) and not isinstance(b, Const)
    }
    common: dict = {}
    for b in shiftable:
        low = min(dict(m).get(b, Fraction(0)) for m in p)
        if low:
            common[b] = low
    if not common and lead == 1:
        return Fraction(1), {}, p
    q: Poly = {}
    for m, c in p.items():
        d = dict(m)
        for b, e in common.items():
            d[b] = d.get(b, 0) - e
        _padd(q, _normalize(d), c / lead)
    return lead, common, q


def _power(p: Poly, r: Fraction) -> Poly:
    r = Fraction(r)
    if r == 0:
        return _const_poly(1)
    if not p:
        if r > 0:
            return {}
        raise ZeroDivisionError("division by zero")
    if r.denominator == 1 and r > 0:
        return _pint_pow(p, int(r))
    if len(p) == 1:
        (m, c), = p.items()
        if r.denominator == 1:
            d = {b: e * r for b, e in m}
            d[Const(c)] = d.get(Const(c), 0) + r
            return _normalize(d)
        distributable = all(
            _is_exp(b) or (not (isinstance(b, Param) and b.sign) and e.numerator % 2 == 1)
            for b, e in m
        )
        if c > 0 and distributable:
            d = {b: e * r for b, e in m}
            d[Const(c)] = r
            return _normalize(d)
        return _atom_poly(from_poly(p), r)
    if r.denominator == 1:
        num = _together_parts(p)
        if num is not None:
            n_poly, dens = num
            # (N / prod B^m)^r = N^r * prod B^(-m r)
            out = _power(n_poly, r)
            for b, mlt in dens.items():
                out = _pmul(out, _atom_poly(b, -mlt * r))
            return out
        c, common, q = _content(p)
        d = {b: e * r for b, e in common.items()}
        d[Const(c)] = d.get(Const(c), 0) + r
        out = _normalize(d)
        return _pmul(out, _atom_poly(from_poly(q), r))
    return _atom_poly(simplify(from_poly(p)), r)


# ---------------------------------------------------------------------------
# back to expressions


def _mono_expr(m: Mono, c: Fraction) -> Expr:
    factors: list[Expr] = []
    for b, e in m:
        factors.append(b if e == 1 else Power(b, e))
    if not factors:
        return Const(c)
    if c != 1:
        factors.insert(0, Const(c))
    if len(factors) == 1:
        return factors[0]
    return Product(tuple(factors))


def from_poly(p: Poly) -> Expr:
    if not p:
        return Const(0)
    terms = [_mono_expr(m, c) for m, c in sorted(p.items(), key=lambda t: _mono_key(t[0]))]
    if len(terms) == 1:
        return terms[0]
    return Sum(tuple(terms))


def _together_parts(p: Poly):
    """Return ``(numerator, {sum_base: multiplicity})`` or ``None``."""
    dens: dict = {}
    for m in p:
        for b, e in m:
            if isinstance(b, Sum) and e < 0 and e.denominator == 1:
                dens[b] = max(dens.get(b, 0), -int(e))
    if not dens:
        return None
    num: Poly = {}
    for m, c in p.items():
        d = dict(m)
        for b, k in dens.items():
            d[b] = d.get(b, 0) + k
        _padd(num, _normalize(d), c)
    return num, dens


def _divexact(n: Poly, b: Poly) -> Poly | None:
    """Exact quotient ``n / b`` over the atoms treated as indeterminates, or None.

    Exponents of ``n`` are first shifted to be non-negative; the division is
    then ordinary multivariate division in lexicographic order, which fails as
    soon as a quotient term would need a negative exponent.
    """
    bases = sorted({x for m in n for x, _ in m} | {x for m in b for x, _ in m}, key=lambda t: t.sort_key)
    idx = {x: i for i, x in enumerate(bases)}
    k = len(bases)

    def vec(m: Mono) -> tuple:
        v = [Fraction(0)] * k
        for x, e in m:
            v[idx[x]] = e
        return tuple(v)

    rem = {vec(m): c for m, c in n.items()}
    bv = {vec(m): c for m, c in b.items()}
    if any(e < 0 for v in bv for e in v):
        return None
    lift = [min(Fraction(0), min(v[i] for v in rem)) for i in range(k)]
    rem = {tuple(e - s for e, s in zip(v, lift)): c for v, c in rem.items()}
    lt_b = max(bv)
    cb = bv[lt_b]
    q: dict = {}
    steps = 0
    while rem:
        steps += 1
        if steps > _MAX_DIV_STEPS:
            return None
        lt = max(rem)
        shift = tuple(a - s for a, s in zip(lt, lt_b))
        if any(e < 0 for e in shift):
            return None
        coef = rem[lt] / cb
        q[shift] = coef
        for v, c in bv.items():
            key = tuple(a + s for a, s in zip(v, shift))
            val = rem.get(key, 0) - coef * c
            if val:
                rem[key] = val
            else:
                rem.pop(key, None)
    out: Poly = {}
    for v, c in q.items():
        d = {bases[i]: e + s for i, (e, s) in enumerate(zip(v, lift)) if e + s}
        _padd(out, _normalize(d), c)
    return out


def _together(p: Poly) -> Expr:
    parts = _together_parts(p)
    if parts is None:
        return from_poly(p)
    num, dens = parts
    if not num:
        return Const(0)
    for b in sorted(dens, key=lambda t: t.sort_key):
        bp = to_poly(b)
        while dens[b] > 0:
            qt = _divexact(num, bp)
            if qt is None:
                break
            num = qt
            dens[b] -= 1
    dens = {b: k for b, k in dens.items() if k}
    if not num:
        return Const(0)
    if not dens:
        return from_poly(num)
    den_factors = [Power(b, Fraction(-k)) for b, k in sorted(dens.items(), key=lambda t: t[0].sort_key)]
    if len(num) == 1:
        (m, c), = num.items()
        d = dict(m)
        for b, k in dens.items():
            d[b] = d.get(b, 0) - k
        mono = tuple(sorted(((b, e) for b, e in d.items() if e), key=lambda t: t[0].sort_key))
        return _mono_expr(mono, c)
    # a multi-term numerator is primitive-normalised so equal results print equally
    return Product(tuple([from_poly(num)] + den_factors))


@lru_cache(maxsize=200_000)
def simplify(e: Expr) -> Expr:
    """Canonical form of ``e`` (idempotent)."""
    return _together(to_poly(e))


def is_structural_zero(e: Expr) -> bool:
    s = simplify(e)
    return isinstance(s, Const) and s.value == 0


def expand_numerator(e: Expr) -> Poly:
    """Polynomial of the numerator of the canonical form (for tests/diagnostics)."""
    parts = _together_parts(to_poly(e))
    return to_poly(e) if parts is None else parts[0]


def content_gcd(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g
