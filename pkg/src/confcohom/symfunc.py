"""Truncated symmetric functions with Laurent-polynomial coefficients.

Internally everything is stored in the power-sum basis, where plethysm is
a substitution; Schur polynomials enter and leave through the character
table of the symmetric group (Murnaghan-Nakayama).  Coefficients are
Laurent polynomials in one variable t over Q, kept exact.
"""

from __future__ import annotations

import functools
from fractions import Fraction


class SymFuncError(ValueError):
    pass


def integer_partitions(n, max_part=None):
    """Partitions of n as descending tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        return [()]
    out = []
    for k in range(min(n, max_part), 0, -1):
        for tail in integer_partitions(n - k, k):
            out.append((k,) + tail)
    return out


def cycle_types(n):
    return integer_partitions(n)


def z_lambda(ct):
    """Order of the centralizer of a permutation of cycle type ct."""
    counts = {}
    for part in ct:
        counts[part] = counts.get(part, 0) + 1
    z = 1
    for part, m in counts.items():
        z *= part**m
        for i in range(1, m + 1):
            z *= i
    return z


def mobius(n):
    if n == 1:
        return 1
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


# -- Laurent polynomials as {power: Fraction} -------------------------------


def laurent(value=1, power=0):
    value = Fraction(value)
    return {power: value} if value else {}


def laurent_add(a, b):
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, Fraction(0)) + v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def laurent_mul(a, b):
    out = {}
    for i, u in a.items():
        for j, v in b.items():
            w = out.get(i + j, Fraction(0)) + u * v
            if w:
                out[i + j] = w
            else:
                out.pop(i + j, None)
    return out


def laurent_scale(a, c):
    c = Fraction(c)
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def laurent_substitute_power(a, n):
    """t -> t^n."""
    return {k * n: v for k, v in a.items()}


def laurent_at_one(a):
    return sum(a.values(), Fraction(0))


def laurent_str(a):
    if not a:
        return "0"
    parts = []
    for k in sorted(a):
        v = a[k]
        if k == 0:
            parts.append(str(v))
        else:
            tpow = "t" if k == 1 else "t^%d" % k
            if v == 1:
                parts.append(tpow)
            elif v == -1:
                parts.append("-%s" % tpow)
            else:
                parts.append("%s*%s" % (v, tpow))
    out = parts[0]
    for p in parts[1:]:
        out += (" + " + p) if not p.startswith("-") else (" - " + p[1:])
    return out


def parse_laurent(text):
    """Parse strings like 't^2', '-t + t^3', '0', '2', '1/2*t^-1'."""
    text = text.replace(" ", "")
    if not text:
        raise SymFuncError("empty Laurent polynomial")
    out = {}
    token = ""
    tokens = []
    for i, ch in enumerate(text):
        if ch in "+-" and i > 0 and text[i - 1] not in "^+-*/e":
            tokens.append(token)
            token = ch
        else:
            token += ch
    tokens.append(token)
    for tok in tokens:
        if not tok or tok in "+-":
            raise SymFuncError("malformed term in %r" % text)
        sign = 1
        while tok and tok[0] in "+-":
            if tok[0] == "-":
                sign = -sign
            tok = tok[1:]
        coeff = Fraction(1)
        power = 0
        try:
            if "t" in tok:
                head, _, tail = tok.partition("t")
                head = head.rstrip("*")
                if head:
                    coeff = Fraction(head)
                if tail.startswith("^"):
                    power = int(tail[1:])
                elif tail:
                    raise SymFuncError("malformed term in %r" % text)
                else:
                    power = 1
            else:
                coeff = Fraction(tok)
        except (ValueError, ZeroDivisionError) as exc:
            raise SymFuncError("malformed term in %r" % text) from exc
        out = laurent_add(out, {power: sign * coeff})
    return out


# -- the character table via Murnaghan-Nakayama ------------------------------


@functools.lru_cache(maxsize=None)
def _mn_character(lam, mu):
    """chi^lam(mu) by border-strip recursion on beta-sets."""
    if not lam:
        return 1 if not mu else 0
    if not mu:
        return 0
    m = len(lam)
    beta = tuple(sorted((lam[i] + (m - 1 - i) for i in range(m)), reverse=True))
    r = mu[0]
    rest = mu[1:]
    total = 0
    bset = set(beta)
    for b in beta:
        nb = b - r
        if nb < 0 or nb in bset:
            continue
        passed = sum(1 for x in beta if nb < x < b)
        new_beta = sorted((x for x in beta if x != b), reverse=True)
        new_beta.append(nb)
        new_beta.sort(reverse=True)
        mm = len(new_beta)
        new_lam = tuple(new_beta[i] - (mm - 1 - i) for i in range(mm))
        new_lam = tuple(x for x in new_lam if x > 0)
        sign = -1 if passed % 2 else 1
        total += sign * _mn_character(new_lam, rest)
    return total


def character_value(lam, mu):
    """Irreducible character chi^lam at cycle type mu (both partitions of n)."""
    lam, mu = tuple(lam), tuple(mu)
    if sum(lam) != sum(mu):
        raise SymFuncError("character of mismatched sizes")
    return _mn_character(lam, mu)


class CharacterTable:
    """All irreducible characters of the symmetric group on n letters."""

    def __init__(self, n):
        self.n = n
        self.partitions = integer_partitions(n)
        self.values = {
            lam: {mu: character_value(lam, mu) for mu in self.partitions}
            for lam in self.partitions
        }

    def check_orthogonality(self):
        for lam in self.partitions:
            for nu in self.partitions:
                acc = Fraction(0)
                for mu in self.partitions:
                    acc += Fraction(self.values[lam][mu] * self.values[nu][mu], z_lambda(mu))
                if acc != (1 if lam == nu else 0):
                    return False
        return True


# -- symmetric functions ------------------------------------------------------


class SymFunc:
    """Symmetric function truncated by total power-sum degree (arity),
    stored in the power-sum basis with Laurent coefficients."""

    __slots__ = ("truncation", "coeffs")

    def __init__(self, truncation, coeffs=None):
        self.truncation = int(truncation)
        clean = {}
        for lam, c in (coeffs or {}).items():
            lam = tuple(sorted(lam, reverse=True))
            if sum(lam) > self.truncation:
                continue
            c = {k: Fraction(v) for k, v in c.items() if v}
            if c:
                clean[lam] = laurent_add(clean.get(lam, {}), c) if lam in clean else c
        self.coeffs = {lam: c for lam, c in clean.items() if c}

    @classmethod
    def zero(cls, truncation):
        return cls(truncation, {})

    @classmethod
    def one(cls, truncation):
        return cls(truncation, {(): laurent(1)})

    @classmethod
    def p(cls, k, truncation, coeff=None):
        return cls(truncation, {(k,): coeff if coeff is not None else laurent(1)})

    def _check(self, other):
        if self.truncation != other.truncation:
            raise SymFuncError("mismatched truncation bounds")

    def __eq__(self, other):
        return (
            isinstance(other, SymFunc)
            and self.truncation == other.truncation
            and self.coeffs == other.coeffs
        )

    def __add__(self, other):
        self._check(other)
        out = {lam: dict(c) for lam, c in self.coeffs.items()}
        for lam, c in other.coeffs.items():
            out[lam] = laurent_add(out.get(lam, {}), c)
        return SymFunc(self.truncation, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return SymFunc(self.truncation, {lam: laurent_scale(v, c) for lam, v in self.coeffs.items()})

    def scale_laurent(self, c):
        return SymFunc(self.truncation, {lam: laurent_mul(v, c) for lam, v in self.coeffs.items()})

    def __mul__(self, other):
        self._check(other)
        out = {}
        for lam, a in self.coeffs.items():
            for mu, b in other.coeffs.items():
                if sum(lam) + sum(mu) > self.truncation:
                    continue
                nu = tuple(sorted(lam + mu, reverse=True))
                c = laurent_mul(a, b)
                out[nu] = laurent_add(out.get(nu, {}), c)
        return SymFunc(self.truncation, out)

    def arity_part(self, n):
        return SymFunc(self.truncation, {lam: c for lam, c in self.coeffs.items() if sum(lam) == n})

    def max_arity(self):
        return max((sum(lam) for lam in self.coeffs), default=0)

    def plethysm(self, other):
        """self o other; other must have no arity-0 term."""
        self._check(other)
        if () in other.coeffs:
            raise SymFuncError("plethysm into a series with a constant term")
        cache = {}

        def p_compose(r):
            if r not in cache:
                out = {}
                for lam, c in other.coeffs.items():
                    scaled = tuple(part * r for part in lam)
                    if sum(scaled) <= self.truncation:
                        out[scaled] = laurent_add(
                            out.get(scaled, {}), laurent_substitute_power(c, r)
                        )
                cache[r] = SymFunc(self.truncation, out)
            return cache[r]

        total = SymFunc.zero(self.truncation)
        for lam, c in self.coeffs.items():
            term = SymFunc.one(self.truncation)
            for part in lam:
                term = term * p_compose(part)
                if not term.coeffs:
                    break
            total = total + term.scale_laurent(c)
        return total

    def euler_specialize(self):
        """Set t = 1 (safe: coefficients are Laurent polynomials)."""
        out = {}
        for lam, c in self.coeffs.items():
            v = laurent_at_one(c)
            if v:
                out[lam] = {0: v}
        return SymFunc(self.truncation, out)

    def to_schur(self):
        """Expansion {partition: Laurent coefficient} in the Schur basis."""
        out = {}
        for n in range(0, self.truncation + 1):
            part_n = {lam: c for lam, c in self.coeffs.items() if sum(lam) == n}
            if not part_n:
                continue
            for lam in integer_partitions(n):
                acc = {}
                for mu, c in part_n.items():
                    chi = character_value(lam, mu) if n else 1
                    if chi:
                        acc = laurent_add(acc, laurent_scale(c, chi))
                if acc:
                    out[lam] = acc
        return out

    def render_schur(self):
        """Human-readable Schur expansion, one line per arity."""
        expansion = self.to_schur()
        by_arity = {}
        for lam, c in expansion.items():
            by_arity.setdefault(sum(lam), []).append((lam, c))
        lines = []
        for n in sorted(by_arity):
            terms = []
            for lam, c in sorted(by_arity[n]):
                name = "s_()" if not lam else "s_(%s)" % ",".join(str(x) for x in lam)
                terms.append("(%s) %s" % (laurent_str(c), name))
            lines.append("arity %d: %s" % (n, " + ".join(terms)))
        return "\n".join(lines) if lines else "0"

    def __repr__(self):
        items = []
        for lam in sorted(self.coeffs):
            items.append("p_%s: %s" % (list(lam), laurent_str(self.coeffs[lam])))
        return "SymFunc(N=%d; %s)" % (self.truncation, "; ".join(items) or "0")


def schur(lam, truncation):
    """s_lambda in the power-sum basis."""
    lam = tuple(sorted(lam, reverse=True))
    n = sum(lam)
    if n > truncation:
        return SymFunc.zero(truncation)
    if n == 0:
        return SymFunc.one(truncation)
    coeffs = {}
    for mu in integer_partitions(n):
        chi = character_value(lam, mu)
        if chi:
            coeffs[mu] = laurent(Fraction(chi, z_lambda(mu)))
    return SymFunc(truncation, coeffs)


def homogeneous(n, truncation):
    """h_n = sum over cycle types of p_mu / z_mu (the trivial character)."""
    if n == 0:
        return SymFunc.one(truncation)
    return schur((n,), truncation)


def element_E(truncation):
    """Sum of all h_n, n >= 0 (the exponential), truncated."""
    total = SymFunc.zero(truncation)
    for n in range(0, truncation + 1):
        total = total + homogeneous(n, truncation)
    return total


def element_L(truncation):
    """The sign-twisted free-Lie characteristic entering the k-equals series."""
    coeffs = {}
    for n in range(1, truncation + 1):
        for d in range(1, n + 1):
            if n % d:
                continue
            mu = mobius(d)
            if not mu:
                continue
            sign = -1 if ((n // d) - 1) % 2 else 1
            lam = (d,) * (n // d)
            coeffs[lam] = laurent_add(
                coeffs.get(lam, {}), laurent(Fraction(sign * mu, n))
            )
    return SymFunc(truncation, coeffs)


def element_S(k, truncation):
    """The hook-shaped generating element for the k-equals family.

    The arity-n term is -(-t)^{n-k+2} times the Schur function of the hook
    with a column of height k (leg k-1, arm n-k); this is the convention
    under which the k = 2 specialization collapses to the direct power-sum
    formula below and the poset characters are reproduced.
    """
    if k < 2:
        raise SymFuncError("need k >= 2")
    total = SymFunc.zero(truncation)
    for n in range(k, truncation + 1):
        hook = (k,) + (1,) * (n - k)
        power = n - k + 2
        sign = -1 if power % 2 else 1
        coeff = {power: Fraction(-sign)}  # -(-t)^power
        total = total + schur(hook, truncation).scale_laurent(coeff)
    return total


def _pi_2_direct(truncation):
    coeffs = {}
    for n in range(1, truncation + 1):
        for d in range(1, n + 1):
            if n % d:
                continue
            mu = mobius(d)
            if not mu:
                continue
            sign = -1 if ((n // d) - 1) % 2 else 1
            lam = (d,) * (n // d)
            coeffs[lam] = laurent_add(
                coeffs.get(lam, {}), {n - 1: Fraction(sign * mu, n)}
            )
    return SymFunc(truncation, coeffs)


def pi_k_char(k, truncation):
    """Characteristic of the partition-poset sequence for the k-equals family:
    s_1 + t^{-1} (L o S_k), reconciled against the direct power-sum formula
    when k = 2."""
    s1 = schur((1,), truncation)
    inner = element_L(truncation).plethysm(element_S(k, truncation))
    result = s1 + inner.scale_laurent({-1: Fraction(1)})
    if k == 2:
        direct = _pi_2_direct(truncation)
        if result != direct:
            raise SymFuncError("plethystic and direct forms disagree for k=2")
    return result


def kequals_series(P, k, truncation):
    """Generating function E o (P(t) . (s_1 + t^{-1} L o S_k)).

    P is the Laurent polynomial {power: coeff} recording the graded
    dimensions of the one-point input with signs (-t)^degree."""
    inner = pi_k_char(k, truncation).scale_laurent(dict(P))
    if not inner.coeffs:
        return SymFunc.one(truncation)
    return element_E(truncation).plethysm(inner)


def euler_specialize(f):
    return f.euler_specialize()


def ch_from_character_table(n, by_degree, truncation):
    """Frobenius characteristic of a graded character table
    {degree: {cycle type: trace}}, with the (-t)^degree convention."""
    coeffs = {}
    for degree, table in by_degree.items():
        sign = -1 if degree % 2 else 1
        for ct, trace in table.items():
            lam = tuple(sorted(ct, reverse=True))
            if sum(lam) != n:
                raise SymFuncError("cycle type %r is not a partition of %d" % (ct, n))
            c = Fraction(trace) * sign / z_lambda(lam)
            if c:
                coeffs[lam] = laurent_add(coeffs.get(lam, {}), {degree: c})
    return SymFunc(truncation, coeffs)
