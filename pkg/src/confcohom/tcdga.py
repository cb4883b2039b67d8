"""Finite twisted commutative dg algebras and their constructors.

An algebra is a finite family of graded components indexed by arity, with
symmetric-group actions given on adjacent transpositions, a differential,
and bilinear multiplication tables between arities.  'shuffle' mode carries
the same data without the group actions.

All structural axioms are checked by ``validate``, which returns a report
rather than raising: validation is the error channel.
"""

from __future__ import annotations

from fractions import Fraction

from .exactalg import ExactMatrix, GradedComplex, RingError


class TcdgaError(ValueError):
    pass


def _addmul(acc, vec, k):
    if k == 0:
        return
    for name, v in vec.items():
        w = acc.get(name, 0) + k * v
        if w:
            acc[name] = w
        else:
            acc.pop(name, None)


def _apply(table, vec):
    """Apply a linear map given as {src_name: {dst_name: coeff}}."""
    out = {}
    for name, v in vec.items():
        image = table.get(name)
        if image:
            _addmul(out, image, v)
    return out


class FiniteCdga:
    """A finite, not necessarily unital, commutative dg algebra."""

    def __init__(self, ring, basis, diff=None, mult=None):
        self.ring = ring
        self.basis = list(basis)  # (name, degree)
        names = [n for n, _ in self.basis]
        if len(set(names)) != len(names):
            raise TcdgaError("duplicate basis names")
        self.degree = dict(self.basis)
        self.diff = {k: dict(v) for k, v in (diff or {}).items() if v}
        self.mult = {k: dict(v) for k, v in (mult or {}).items() if v}

    def product(self, a, b):
        out = {}
        for an, av in a.items():
            for bn, bv in b.items():
                _addmul(out, self.mult.get((an, bn), {}), av * bv)
        return out

    def d(self, vec):
        return _apply(self.diff, vec)

    def validate(self):
        failures = []
        for name in self.degree:
            dd = self.d(self.d({name: 1}))
            if dd:
                failures.append("d^2 != 0 on %s" % name)
            for img, _ in self.diff.get(name, {}).items():
                if self.degree[img] != self.degree[name] + 1:
                    failures.append("differential of %s is not of degree +1" % name)
        for (a, b), out in self.mult.items():
            dtot = self.degree[a] + self.degree[b]
            for c in out:
                if self.degree[c] != dtot:
                    failures.append("product %s*%s is not degree-additive" % (a, b))
        for a in self.degree:
            for b in self.degree:
                ab = self.product({a: 1}, {b: 1})
                ba = self.product({b: 1}, {a: 1})
                sign = -1 if (self.degree[a] * self.degree[b]) % 2 else 1
                scaled = {k: sign * v for k, v in ab.items()}
                if ba != scaled:
                    failures.append("commutativity fails on (%s, %s)" % (a, b))
                lhs = self.d(ab)
                rhs = self.product(self.d({a: 1}), {b: 1})
                _addmul(rhs, self.product({a: 1}, self.d({b: 1})), -1 if self.degree[a] % 2 else 1)
                if lhs != rhs:
                    failures.append("Leibniz fails on (%s, %s)" % (a, b))
                for c in self.degree:
                    left = self.product(ab, {c: 1})
                    right = self.product({a: 1}, self.product({b: 1}, {c: 1}))
                    if left != right:
                        failures.append("associativity fails on (%s, %s, %s)" % (a, b, c))
        return ValidationReport(failures)


class GradedModuleInput:
    """A finitely supported degree -> rank table over Z or Q."""

    def __init__(self, ring, ranks):
        if ring not in ("Z", "Q"):
            raise RingError("ring must be 'Z' or 'Q'")
        self.ring = ring
        self.ranks = {int(d): int(r) for d, r in ranks.items() if r}
        if any(r < 0 for r in self.ranks.values()):
            raise TcdgaError("negative rank")

    def poincare(self):
        """Laurent coefficients {degree: rank}."""
        return dict(self.ranks)

    def total_rank(self):
        return sum(self.ranks.values())


class ValidationReport:
    def __init__(self, failures):
        self.failures = list(failures)

    @property
    def ok(self):
        return not self.failures

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "ValidationReport(ok)"
        return "ValidationReport(%d failures: %s)" % (
            len(self.failures),
            "; ".join(self.failures[:5]) + ("; ..." if len(self.failures) > 5 else ""),
        )


def adjacent_transposition(n, i):
    """The 1-based image tuple of s_i = (i, i+1) in S_n."""
    images = list(range(1, n + 1))
    images[i - 1], images[i] = images[i], images[i - 1]
    return tuple(images)


def decompose_into_adjacent(perm):
    """Indices i with perm = s_{i_1} o s_{i_2} o ... o s_{i_k} (composition of maps)."""
    work = list(perm)
    rev = []
    changed = True
    while changed:
        changed = False
        for i in range(len(work) - 1):
            if work[i] > work[i + 1]:
                work[i], work[i + 1] = work[i + 1], work[i]
                rev.append(i + 1)
                changed = True
    rev.reverse()
    return rev


class FiniteTcdga:
    """Arity-indexed graded components with S_n-actions, products, differential.

    components: arity -> list of (name, degree)
    diff: arity -> {name: {name: coeff}}
    action: arity -> {i: {name: {name: coeff}}} for the adjacent transposition s_i
    mult: (n, m) -> {(a_name, b_name): {c_name: coeff}}
    mode: 'twisted' or 'shuffle' (no action data)
    """

    def __init__(self, ring, max_arity, components, diff, action, mult, mode="twisted"):
        if ring not in ("Z", "Q"):
            raise RingError("ring must be 'Z' or 'Q'")
        if mode not in ("twisted", "shuffle"):
            raise TcdgaError("mode must be 'twisted' or 'shuffle'")
        self.ring = ring
        self.max_arity = int(max_arity)
        self.mode = mode
        self.components = {}
        self.degree = {}
        for n in range(1, self.max_arity + 1):
            basis = [(str(name), int(deg)) for name, deg in components.get(n, [])]
            names = [name for name, _ in basis]
            if len(set(names)) != len(names):
                raise TcdgaError("duplicate basis names in arity %d" % n)
            self.components[n] = basis
            self.degree[n] = dict(basis)
        self.diff = {n: {k: dict(v) for k, v in (diff.get(n) or {}).items() if v} for n in self.components}
        if mode == "twisted":
            self.action = {
                n: {int(i): {k: dict(v) for k, v in tbl.items()} for i, tbl in (action.get(n) or {}).items()}
                for n in self.components
            }
            for n in self.components:
                for i in range(1, n):
                    if i not in self.action.get(n, {}):
                        raise TcdgaError("missing action of s_%d in arity %d" % (i, n))
        else:
            self.action = None
        self.mult = {}
        for (n, m), table in mult.items():
            if n + m <= self.max_arity:
                self.mult[(n, m)] = {k: dict(v) for k, v in table.items() if v}
        self._perm_cache = {}

    # -- basic linear structure ------------------------------------------------

    def basis(self, n):
        return self.components[n]

    def degree_of(self, n, name):
        return self.degree[n][name]

    def d(self, n, vec):
        return _apply(self.diff.get(n, {}), vec)

    def multiply(self, n, m, a, b):
        """Bilinear product A(n) x A(m) -> A(n+m) on element dicts."""
        if n + m > self.max_arity:
            raise TcdgaError("product lands beyond max arity %d" % self.max_arity)
        table = self.mult.get((n, m), {})
        out = {}
        for an, av in a.items():
            for bn, bv in b.items():
                _addmul(out, table.get((an, bn), {}), av * bv)
        return out

    def act_generator(self, n, i, vec):
        return _apply(self.action[n][i], vec)

    def act(self, n, perm, vec):
        """Action of an arbitrary permutation (1-based image tuple) on A(n)."""
        if self.mode != "twisted":
            raise TcdgaError("no group action in shuffle mode")
        table = self.perm_table(n, perm)
        return _apply(table, vec)

    def perm_table(self, n, perm):
        perm = tuple(perm)
        key = (n, perm)
        cached = self._perm_cache.get(key)
        if cached is not None:
            return cached
        word = decompose_into_adjacent(perm)
        table = {name: {name: 1} for name, _ in self.components[n]}
        for i in reversed(word):
            # rightmost factor acts first
            table = {src: _apply(self.action[n][i], img) for src, img in table.items()}
        self._perm_cache[key] = table
        return table

    def component_complex(self, n):
        """The arity-n component as a GradedComplex with name labels."""
        basis = self.components[n]
        by_degree = {}
        for name, deg in basis:
            by_degree.setdefault(deg, []).append(name)
        pos = {}
        for deg, names in by_degree.items():
            for i, name in enumerate(names):
                pos[name] = (deg, i)
        ranks = {deg: len(names) for deg, names in by_degree.items()}
        diffs = {}
        for deg, names in by_degree.items():
            entries = {}
            for j, name in enumerate(names):
                for img, coeff in self.diff.get(n, {}).get(name, {}).items():
                    dd, i = pos[img]
                    if dd != deg + 1:
                        raise TcdgaError("differential of %s not of degree +1" % name)
                    entries[(i, j)] = coeff
            if entries:
                diffs[deg] = ExactMatrix(self.ring, len(by_degree.get(deg + 1, [])), len(names), entries)
        labels = {deg: list(names) for deg, names in by_degree.items()}
        return GradedComplex(self.ring, ranks, diffs, labels)

    def perm_matrix(self, n, perm):
        """Per-degree matrices of the action of perm on the arity-n component."""
        cx = self.component_complex(n)
        pos = {}
        for deg in cx.degrees():
            for i, name in enumerate(cx.basis_labels[deg]):
                pos[name] = (deg, i)
        table = self.perm_table(n, perm)
        entries = {deg: {} for deg in cx.degrees()}
        for src, img in table.items():
            dsrc, j = pos[src]
            for dst, coeff in img.items():
                ddst, i = pos[dst]
                if ddst != dsrc:
                    raise TcdgaError("action does not preserve degree on %s" % src)
                entries[dsrc][(i, j)] = coeff
        return {
            deg: ExactMatrix(self.ring, cx.rank(deg), cx.rank(deg), entries[deg])
            for deg in cx.degrees()
        }

    # -- validation --------------------------------------------------------

    def validate(self):
        failures = []
        for n in self.components:
            degree = self.degree[n]
            for name in degree:
                if self.d(n, self.d(n, {name: 1})):
                    failures.append("arity %d: d^2 != 0 on %s" % (n, name))
                for img in self.diff.get(n, {}).get(name, {}):
                    if degree[img] != degree[name] + 1:
                        failures.append("arity %d: d not of degree +1 on %s" % (n, name))
        if self.mode == "twisted":
            failures.extend(self._validate_actions())
        failures.extend(self._validate_products())
        return ValidationReport(failures)

    def _validate_actions(self):
        failures = []
        for n in self.components:
            degree = self.degree[n]
            for i in range(1, n):
                tbl = self.action[n][i]
                for name in degree:
                    img = tbl.get(name, {})
                    for dst in img:
                        if degree[dst] != degree[name]:
                            failures.append("arity %d: s_%d does not preserve degree" % (n, i))
                    # involution
                    if _apply(tbl, _apply(tbl, {name: 1})) != {name: 1}:
                        failures.append("arity %d: s_%d^2 != id on %s" % (n, i, name))
                    # chain map
                    lhs = self.d(n, _apply(tbl, {name: 1}))
                    rhs = _apply(tbl, self.d(n, {name: 1}))
                    if lhs != rhs:
                        failures.append("arity %d: s_%d does not commute with d on %s" % (n, i, name))
            for i in range(1, n):
                for j in range(i + 1, n):
                    a, b = self.action[n][i], self.action[n][j]
                    for name in degree:
                        if j == i + 1:
                            lhs = _apply(a, _apply(b, _apply(a, {name: 1})))
                            rhs = _apply(b, _apply(a, _apply(b, {name: 1})))
                            if lhs != rhs:
                                failures.append("arity %d: braid relation fails for (s_%d, s_%d)" % (n, i, j))
                        else:
                            lhs = _apply(a, _apply(b, {name: 1}))
                            rhs = _apply(b, _apply(a, {name: 1}))
                            if lhs != rhs:
                                failures.append("arity %d: s_%d and s_%d do not commute" % (n, i, j))
        return failures

    def _validate_products(self):
        failures = []
        pairs = [(n, m) for n in self.components for m in self.components if n + m <= self.max_arity]
        for n, m in pairs:
            deg_n, deg_m, deg_nm = self.degree[n], self.degree[m], self.degree[n + m]
            for a in deg_n:
                ea = {a: 1}
                for b in deg_m:
                    eb = {b: 1}
                    ab = self.multiply(n, m, ea, eb)
                    for c in ab:
                        if deg_nm[c] != deg_n[a] + deg_m[b]:
                            failures.append("product not degree-additive on (%d:%s, %d:%s)" % (n, a, m, b))
                    # Leibniz
                    lhs = self.d(n + m, ab)
                    rhs = self.multiply(n, m, self.d(n, ea), eb)
                    _addmul(rhs, self.multiply(n, m, ea, self.d(m, eb)), -1 if deg_n[a] % 2 else 1)
                    if lhs != rhs:
                        failures.append("Leibniz fails on (%d:%s, %d:%s)" % (n, a, m, b))
                    # commutativity
                    ba = self.multiply(m, n, eb, ea)
                    sign = -1 if (deg_n[a] * deg_m[b]) % 2 else 1
                    if self.mode == "twisted":
                        box = box_permutation(n, m)
                        expected = self.act(n + m, box, {k: sign * v for k, v in ab.items()})
                    else:
                        expected = {k: sign * v for k, v in ab.items()}
                    if ba != expected:
                        failures.append("commutativity fails on (%d:%s, %d:%s)" % (n, a, m, b))
                    if self.mode == "twisted":
                        failures.extend(self._check_equivariance(n, m, a, b, ab))
            # associativity
            for p in self.components:
                if n + m + p > self.max_arity:
                    continue
                deg_p = self.degree[p]
                for a in deg_n:
                    for b in deg_m:
                        ab = self.multiply(n, m, {a: 1}, {b: 1})
                        for c in deg_p:
                            left = self.multiply(n + m, p, ab, {c: 1})
                            bc = self.multiply(m, p, {b: 1}, {c: 1})
                            right = self.multiply(n, m + p, {a: 1}, bc)
                            if left != right:
                                failures.append(
                                    "associativity fails on (%d:%s, %d:%s, %d:%s)" % (n, a, m, b, p, c)
                                )
        return failures

    def _check_equivariance(self, n, m, a, b, ab):
        failures = []
        for i in range(1, n):
            lhs = self.multiply(n, m, self.act_generator(n, i, {a: 1}), {b: 1})
            rhs = self.act_generator(n + m, i, ab)
            if lhs != rhs:
                failures.append("equivariance fails for s_%d x 1 on (%d:%s, %d:%s)" % (i, n, a, m, b))
        for i in range(1, m):
            lhs = self.multiply(n, m, {a: 1}, self.act_generator(m, i, {b: 1}))
            rhs = self.act_generator(n + m, n + i, ab)
            if lhs != rhs:
                failures.append("equivariance fails for 1 x s_%d on (%d:%s, %d:%s)" % (i, n, a, m, b))
        return failures


def box_permutation(n, m):
    """The permutation of {1..n+m} moving the first n elements past the last m."""
    return tuple(list(range(m + 1, n + m + 1)) + list(range(1, m + 1)))


def validate(algebra):
    return algebra.validate()


def constant_tcdga(omega, max_arity):
    """Every arity is a copy of the cdga omega; bijections act as the identity."""
    report = omega.validate()
    if not report.ok:
        raise TcdgaError("invalid cdga: %s" % report)
    components = {n: list(omega.basis) for n in range(1, max_arity + 1)}
    diff = {n: {k: dict(v) for k, v in omega.diff.items()} for n in range(1, max_arity + 1)}
    action = {
        n: {i: {name_: {name_: 1} for name_, _ in omega.basis} for i in range(1, n)}
        for n in range(1, max_arity + 1)
    }
    mult = {}
    for n in range(1, max_arity + 1):
        for m in range(1, max_arity + 1 - n):
            mult[(n, m)] = {k: dict(v) for k, v in omega.mult.items()}
    return FiniteTcdga(omega.ring, max_arity, components, diff, action, mult)


def formal_tcdga(module, max_arity):
    """Zero differential and multiplication; trivial action: the i-acyclic model."""
    basis = []
    for deg in sorted(module.ranks):
        for i in range(module.ranks[deg]):
            basis.append(("h%d_%d" % (deg, i), deg))
    components = {n: list(basis) for n in range(1, max_arity + 1)}
    action = {
        n: {i: {name: {name: 1} for name, _ in basis} for i in range(1, n)}
        for n in range(1, max_arity + 1)
    }
    return FiniteTcdga(module.ring, max_arity, components, {}, action, {})


def suspension(algebra):
    """Arity n shifted up n degrees and twisted by the sign character.

    The multiplication picks up the sign (-1)^{m * deg_A(a)} on
    A(n) x A(m), and the differential on arity n is (-1)^n d; this is the
    unique completion of the degree/sign regrading passing validation.
    """
    if algebra.mode != "twisted":
        raise TcdgaError("suspension needs the twisted mode (sign character twist)")
    N = algebra.max_arity
    components = {
        n: [(name, deg + n) for name, deg in algebra.components[n]] for n in algebra.components
    }
    diff = {}
    for n in algebra.components:
        sign = -1 if n % 2 else 1
        diff[n] = {
            src: {dst: sign * v for dst, v in img.items()}
            for src, img in algebra.diff.get(n, {}).items()
        }
    action = {
        n: {
            i: {src: {dst: -v for dst, v in img.items()} for src, img in tbl.items()}
            for i, tbl in algebra.action[n].items()
        }
        for n in algebra.components
    }
    mult = {}
    for (n, m), table in algebra.mult.items():
        out = {}
        for (a, b), img in table.items():
            sign = -1 if (m * algebra.degree[n][a]) % 2 else 1
            out[(a, b)] = {c: sign * v for c, v in img.items()}
        mult[(n, m)] = out
    result = FiniteTcdga(algebra.ring, N, components, diff, action, mult)
    report = result.validate()
    if not report.ok:
        raise TcdgaError("suspension failed validation: %s" % report)
    return result


def shuffle_forget(algebra):
    """Drop the group actions; multiplication tables are kept as-is.

    The result is validated as a commutative shuffle algebra, whose
    commutativity axiom is the plain graded one (no box permutation);
    this is what makes the block-merge functor on partitions well defined.
    """
    return FiniteTcdga(
        algebra.ring,
        algebra.max_arity,
        {n: list(b) for n, b in algebra.components.items()},
        {n: {k: dict(v) for k, v in t.items()} for n, t in algebra.diff.items()},
        {},
        {k: {kk: dict(vv) for kk, vv in t.items()} for k, t in algebra.mult.items()},
        mode="shuffle",
    )


# -- JSON ------------------------------------------------------------------


def _coeff_to_json(v):
    if isinstance(v, Fraction) and v.denominator != 1:
        return "%d/%d" % (v.numerator, v.denominator)
    return int(v)


def _coeff_from_json(v):
    if isinstance(v, str):
        num, _, den = v.partition("/")
        return Fraction(int(num), int(den or 1))
    return v


def tcdga_to_json(algebra):
    comps = []
    for n in sorted(algebra.components):
        entry = {
            "arity": n,
            "basis": [{"name": name, "degree": deg} for name, deg in algebra.components[n]],
            "d": [
                [src, dst, _coeff_to_json(v)]
                for src, img in sorted(algebra.diff.get(n, {}).items())
                for dst, v in sorted(img.items())
            ],
        }
        if algebra.mode == "twisted":
            entry["action"] = {
                "s%d" % i: [
                    [src, dst, _coeff_to_json(v)]
                    for src, img in sorted(tbl.items())
                    for dst, v in sorted(img.items())
                ]
                for i, tbl in sorted(algebra.action[n].items())
            }
        comps.append(entry)
    mult = []
    for (n, m) in sorted(algebra.mult):
        table = algebra.mult[(n, m)]
        mult.append(
            {
                "n": n,
                "m": m,
                "table": [
                    [a, b, [[c, _coeff_to_json(v)] for c, v in sorted(img.items())]]
                    for (a, b), img in sorted(table.items())
                ],
            }
        )
    return {
        "ring": algebra.ring,
        "max_arity": algebra.max_arity,
        "mode": algebra.mode,
        "components": comps,
        "mult": mult,
    }


def tcdga_from_json(data):
    ring = data["ring"]
    N = data["max_arity"]
    mode = data.get("mode", "twisted")
    components = {}
    diff = {}
    action = {}
    for entry in data["components"]:
        n = entry["arity"]
        components[n] = [(b["name"], b["degree"]) for b in entry["basis"]]
        dtable = {}
        for src, dst, v in entry.get("d", []):
            dtable.setdefault(src, {})[dst] = _coeff_from_json(v)
        diff[n] = dtable
        if mode == "twisted":
            atable = {}
            for key, triples in entry.get("action", {}).items():
                i = int(key[1:])
                tbl = {}
                for src, dst, v in triples:
                    tbl.setdefault(src, {})[dst] = _coeff_from_json(v)
                atable[i] = tbl
            # unnamed generators default to the identity
            for i in range(1, n):
                if i not in atable:
                    atable[i] = {name: {name: 1} for name, _ in components[n]}
            action[n] = atable
    mult = {}
    for entry in data.get("mult", []):
        table = {}
        for a, b, img in entry["table"]:
            table[(a, b)] = {c: _coeff_from_json(v) for c, v in img}
        mult[(entry["n"], entry["m"])] = table
    return FiniteTcdga(ring, N, components, diff, action, mult, mode=mode)


def graded_module_from_json(data):
    return GradedModuleInput(data["ring"], {int(k): v for k, v in data["ranks"].items()})


def cdga_from_json(data):
    diff = {}
    for src, dst, v in data.get("d", []):
        diff.setdefault(src, {})[dst] = _coeff_from_json(v)
    mult = {}
    for a, b, img in data.get("mult", []):
        mult[(a, b)] = {c: _coeff_from_json(v) for c, v in img}
    return FiniteCdga(
        data["ring"],
        [(b["name"], b["degree"]) for b in data["basis"]],
        diff,
        mult,
    )


def point_cdga(ring="Q"):
    """One idempotent generator in degree 0: a model for the cochains of a point."""
    return FiniteCdga(ring, [("e", 0)], {}, {("e", "e"): {"e": 1}})


def acyclic_cdga(ring="Q"):
    """Basis c (degree 0), w (degree 1) with dc = w and all products zero:
    c*c = 0, cw = wc = 0, w*w = 0.  Acyclic, with a nontrivial differential."""
    return FiniteCdga(
        ring,
        [("c", 0), ("w", 1)],
        {"c": {"w": 1}},
        {},
    )
