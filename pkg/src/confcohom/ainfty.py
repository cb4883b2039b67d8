"""Transfer of formality data across an ideal whose cohomology maps to zero.

Given a dg algebra A and an ideal I with H(I) -> H(A) zero, one can choose
cocycle representatives f and primitives g with d g = -f, and the maps
f_n(x_1,...,x_n) = +- f(x_1) g(x_2) ... g(x_n) assemble into a morphism
from H(I), with all operations zero, into I, up to coherent homotopy.
The relations d f_n = sum_{i+j=n} (-1)^i f_i f_j are verified symbolically
on every basis tuple; the verifier is the contract.
"""

from __future__ import annotations

from fractions import Fraction

from .exactalg import (
    ColumnSpace,
    ExactMatrix,
    GradedComplex,
    cohomology,
    q_column_space,
    q_kernel_basis,
    q_solve,
)
from .tcdga import ValidationReport, _addmul, _apply


class AInftyError(ValueError):
    pass


class FiniteDga:
    """Graded free module with differential and an associative (not
    necessarily commutative) multiplication."""

    def __init__(self, ring, basis, diff=None, mult=None):
        self.ring = ring
        self.basis = [(str(n), int(d)) for n, d in basis]
        names = [n for n, _ in self.basis]
        if len(set(names)) != len(names):
            raise AInftyError("duplicate basis names")
        self.degree = dict(self.basis)
        self.diff = {k: dict(v) for k, v in (diff or {}).items() if v}
        self.mult = {k: dict(v) for k, v in (mult or {}).items() if v}

    @classmethod
    def from_cdga(cls, omega):
        return cls(omega.ring, omega.basis, omega.diff, omega.mult)

    def d(self, vec):
        return _apply(self.diff, vec)

    def product(self, a, b):
        out = {}
        for an, av in a.items():
            for bn, bv in b.items():
                _addmul(out, self.mult.get((an, bn), {}), av * bv)
        return out

    def element_degree(self, vec):
        degs = {self.degree[n] for n in vec}
        if len(degs) > 1:
            raise AInftyError("inhomogeneous element")
        return degs.pop() if degs else None

    def validate(self):
        failures = []
        for name, deg in self.basis:
            for img in self.diff.get(name, {}):
                if self.degree[img] != deg + 1:
                    failures.append("d is not of degree +1 on %s" % name)
            if self.d(self.d({name: 1})):
                failures.append("d^2 != 0 on %s" % name)
        for (a, b), out in self.mult.items():
            dtot = self.degree[a] + self.degree[b]
            for c in out:
                if self.degree[c] != dtot:
                    failures.append("product %s*%s is not degree-additive" % (a, b))
        names = [n for n, _ in self.basis]
        for a in names:
            for b in names:
                ab = self.product({a: 1}, {b: 1})
                lhs = self.d(ab)
                rhs = self.product(self.d({a: 1}), {b: 1})
                sign = -1 if self.degree[a] % 2 else 1
                _addmul(rhs, self.product({a: 1}, self.d({b: 1})), sign)
                if lhs != rhs:
                    failures.append("Leibniz fails on (%s, %s)" % (a, b))
                for c in names:
                    if self.product(ab, {c: 1}) != self.product({a: 1}, self.product({b: 1}, {c: 1})):
                        failures.append("associativity fails on (%s, %s, %s)" % (a, b, c))
        return ValidationReport(failures)

    def complex(self):
        by_degree = {}
        for name, deg in self.basis:
            by_degree.setdefault(deg, []).append(name)
        pos = {n: (d, i) for d, ns in by_degree.items() for i, n in enumerate(ns)}
        ranks = {d: len(ns) for d, ns in by_degree.items()}
        entries = {d: {} for d in by_degree}
        for name, deg in self.basis:
            j = pos[name][1]
            for img, coeff in self.diff.get(name, {}).items():
                entries[deg][(pos[img][1], j)] = coeff
        diffs = {
            d: ExactMatrix(self.ring, len(by_degree.get(d + 1, [])), len(ns), entries[d])
            for d, ns in by_degree.items()
            if entries[d]
        }
        labels = {d: list(ns) for d, ns in by_degree.items()}
        return GradedComplex(self.ring, ranks, diffs, labels)


class IdealData:
    """A sub-basis spanning a two-sided differential ideal."""

    def __init__(self, names):
        self.names = tuple(dict.fromkeys(names))

    def validate(self, algebra):
        failures = []
        span = set(self.names)
        for n in self.names:
            if n not in algebra.degree:
                failures.append("%s is not a basis element" % n)
                continue
            if any(img not in span for img in algebra.diff.get(n, {})):
                failures.append("d does not preserve the ideal at %s" % n)
        for a, _ in algebra.basis:
            for n in self.names:
                for u, v in ((a, n), (n, a)):
                    prod = algebra.mult.get((u, v), {})
                    if any(c not in span for c in prod):
                        failures.append("ideal is not closed under %s * %s" % (u, v))
        return ValidationReport(failures)


class HypothesisReport:
    def __init__(self, ok, h_ideal, h_ambient, failures):
        self.ok = ok
        self.h_ideal = h_ideal
        self.h_ambient = h_ambient
        self.failures = list(failures)

    def __repr__(self):
        return "HypothesisReport(ok=%s, H(I)=%r, H(A)=%r%s)" % (
            self.ok,
            self.h_ideal,
            self.h_ambient,
            "" if self.ok else "; " + "; ".join(self.failures[:3]),
        )


def _ideal_complex(algebra, ideal):
    by_degree = {}
    for name in ideal.names:
        by_degree.setdefault(algebra.degree[name], []).append(name)
    pos = {n: (d, i) for d, ns in by_degree.items() for i, n in enumerate(ns)}
    ranks = {d: len(ns) for d, ns in by_degree.items()}
    entries = {d: {} for d in by_degree}
    for name in ideal.names:
        d, j = pos[name]
        for img, coeff in algebra.diff.get(name, {}).items():
            entries[d][(pos[img][1], j)] = coeff
    diffs = {
        d: ExactMatrix(algebra.ring, len(by_degree.get(d + 1, [])), len(ns), entries[d])
        for d, ns in by_degree.items()
        if entries[d]
    }
    labels = {d: list(ns) for d, ns in by_degree.items()}
    return GradedComplex(algebra.ring, ranks, diffs, labels)


def _ideal_cocycle_representatives(algebra, ideal):
    """Per degree: reduced kernel representatives of H(d|_I), as element dicts."""
    cx = _ideal_complex(algebra, ideal)
    reps = {}
    for deg in cx.degrees():
        names = cx.basis_labels[deg]
        image = q_column_space(cx.differential(deg - 1).to_ring("Q"))
        span = ColumnSpace()
        for col in image.basis:
            span.insert(col)
        chosen = []
        for vec in q_kernel_basis(cx.differential(deg).to_ring("Q")):
            residual = span.insert(vec)
            if residual is not None:
                chosen.append({names[i]: v for i, v in residual.items()})
        if chosen:
            reps[deg] = chosen
    return reps


def hypothesis_check(algebra, ideal):
    """Validate the setup: valid dga and ideal, and H(I) -> H(A) zero."""
    failures = []
    report = algebra.validate()
    failures.extend(report.failures)
    failures.extend(ideal.validate(algebra).failures)
    h_ideal = h_ambient = None
    if not failures:
        ideal_cx = _ideal_complex(algebra, ideal)
        ambient_cx = algebra.complex()
        h_ideal = cohomology(ideal_cx)
        h_ambient = cohomology(ambient_cx)
        # the induced map vanishes iff every representative bounds in A
        amb_pos = {}
        for d in ambient_cx.degrees():
            amb_pos[d] = {n: i for i, n in enumerate(ambient_cx.basis_labels[d])}
        for deg, reps in _ideal_cocycle_representatives(algebra, ideal).items():
            dmat = ambient_cx.differential(deg - 1).to_ring("Q")
            for rep in reps:
                rhs = {amb_pos[deg][n]: Fraction(v) for n, v in rep.items()}
                if q_solve(dmat, rhs) is None:
                    failures.append(
                        "class %r in degree %d does not bound in the ambient algebra"
                        % (sorted(rep), deg)
                    )
    return HypothesisReport(not failures, h_ideal, h_ambient, failures)


class AInftyMorphism:
    """The family f_n built from representatives f and primitives g."""

    def __init__(self, algebra, ideal, classes, f_map, g_map):
        self.algebra = algebra
        self.ideal = ideal
        self.classes = classes  # list of (class id, degree)
        self.f_map = f_map  # class id -> element of I
        self.g_map = g_map  # class id -> element of A with d g = -f

    def f_n(self, ids):
        """Evaluate f_n on a tuple of class ids."""
        n = len(ids)
        degs = [dict(self.classes)[i] for i in ids]
        sign_exp = sum((n - 1 - l) * degs[l] for l in range(n - 1))
        value = dict(self.f_map[ids[0]])
        for i in ids[1:]:
            value = self.algebra.product(value, self.g_map[i])
            if not value:
                break
        if sign_exp % 2 and value:
            value = {k: -v for k, v in value.items()}
        return value


def build_morphism(algebra, ideal, max_n=None):
    """Choose f (echelon cocycle representatives in the ideal) and g with
    d g = -f, and assemble the multilinear family."""
    if algebra.ring != "Q":
        raise AInftyError("the morphism is built over Q")
    report = hypothesis_check(algebra, ideal)
    if not report.ok:
        raise AInftyError("hypotheses fail: %s" % "; ".join(report.failures[:3]))
    ambient_cx = algebra.complex()
    amb_pos = {
        d: {n: i for i, n in enumerate(ambient_cx.basis_labels[d])}
        for d in ambient_cx.degrees()
    }
    amb_names = {d: ambient_cx.basis_labels[d] for d in ambient_cx.degrees()}
    classes = []
    f_map = {}
    g_map = {}
    counter = 0
    for deg, reps in sorted(_ideal_cocycle_representatives(algebra, ideal).items()):
        dmat = ambient_cx.differential(deg - 1).to_ring("Q")
        for rep in reps:
            cid = "h%d" % counter
            counter += 1
            classes.append((cid, deg))
            f_map[cid] = rep
            rhs = {amb_pos[deg][n]: -Fraction(v) for n, v in rep.items()}
            sol = q_solve(dmat, rhs)
            if sol is None:
                raise AInftyError("no primitive for a class that passed the hypothesis")
            g_map[cid] = {amb_names[deg - 1][i]: v for i, v in sol.items() if v}
    return AInftyMorphism(algebra, ideal, classes, f_map, g_map)


class VerifyReport:
    def __init__(self, ok, checked, first_failure=None):
        self.ok = ok
        self.checked = checked
        self.first_failure = first_failure

    def __repr__(self):
        if self.ok:
            return "VerifyReport(ok, %d tuples)" % self.checked
        return "VerifyReport(FAIL at %r)" % (self.first_failure,)


def verify_morphism(morphism, max_n):
    """Check d f_n = sum_{i+j=n} (-1)^i f_i f_j on every basis tuple.

    On a tuple where the product chain and every split factor vanish, both
    sides are identically zero, so only tuples supporting a nonzero product
    need explicit evaluation; they are enumerated from memoized product
    tables.  The check is still exhaustive over all tuples.
    """
    algebra = morphism.algebra
    degree_of = dict(morphism.classes)
    ids = [cid for cid, _ in morphism.classes]

    # unsigned product chains f(x_1) g(x_2) ... g(x_k), zeros dropped
    chains = {(): None}
    nonzero = {1: {(c,): dict(morphism.f_map[c]) for c in ids}}
    nonzero[1] = {t: v for t, v in nonzero[1].items() if v}
    for k in range(2, max_n + 1):
        level = {}
        for t, val in nonzero.get(k - 1, {}).items():
            for c in ids:
                prod = algebra.product(val, morphism.g_map[c])
                if prod:
                    level[t + (c,)] = prod
        nonzero[k] = level

    def f_value(tup):
        val = nonzero.get(len(tup), {}).get(tup)
        if val is None:
            return {}
        sign = sum((len(tup) - 1 - l) * degree_of[c] for l, c in enumerate(tup[:-1]))
        if sign % 2:
            return {k: -v for k, v in val.items()}
        return val

    # tuples where either side can be nonzero
    candidates = {n: set() for n in range(1, max_n + 1)}
    for n in range(1, max_n + 1):
        candidates[n].update(nonzero.get(n, {}))
    for i in range(1, max_n):
        for left in nonzero.get(i, {}):
            for j in range(1, max_n - i + 1):
                for right in nonzero.get(j, {}):
                    candidates[i + j].add(left + right)

    checked = sum(len(ids) ** n for n in range(1, max_n + 1))
    for n in range(1, max_n + 1):
        for tup in sorted(candidates[n]):
            lhs = algebra.d(f_value(tup))
            rhs = {}
            for i in range(1, n):
                j = n - i
                left = f_value(tup[:i])
                right = f_value(tup[i:])
                if not left or not right:
                    continue
                # Koszul: f_j has degree 1-j and moves past the first i inputs
                koszul = (1 - j) * sum(degree_of[c] for c in tup[:i])
                sign = -1 if (i + koszul) % 2 else 1
                _addmul(rhs, algebra.product(left, right), sign)
            if lhs != rhs:
                return VerifyReport(False, checked, (n, tup, lhs, rhs))
    return VerifyReport(True, checked)


def truncated_word_dga(pairs, extra_cocycles=(), max_word_length=2, ring="Q"):
    """A dg algebra of noncommutative words over letters, truncated by length.

    ``pairs`` is a list of degrees: for each degree d a letter s of degree d
    with ds = x, x of degree d+1; ``extra_cocycles`` are degrees of
    additional closed letters.  Products concatenate, vanishing beyond the
    length cap.  The words containing at least one x-letter span an ideal.
    """
    letters = []
    diff_letter = {}
    for i, d in enumerate(pairs):
        s, x = "s%d" % i, "x%d" % i
        letters.append((s, d))
        letters.append((x, d + 1))
        diff_letter[s] = x
    for i, d in enumerate(extra_cocycles):
        letters.append(("c%d" % i, d))
    degree = dict(letters)
    words = [(l,) for l, _ in letters]
    frontier = list(words)
    for _ in range(max_word_length - 1):
        frontier = [w + (l,) for w in frontier for l, _ in letters]
        words.extend(frontier)

    def name(word):
        return "_".join(word)

    basis = [(name(w), sum(degree[l] for l in w)) for w in words]
    diff = {}
    for w in words:
        image = {}
        running = 0
        for k, letter in enumerate(w):
            if letter in diff_letter:
                sign = -1 if running % 2 else 1
                new = w[:k] + (diff_letter[letter],) + w[k + 1 :]
                image[name(new)] = image.get(name(new), 0) + sign
            running += degree[letter]
        image = {k: v for k, v in image.items() if v}
        if image:
            diff[name(w)] = image
    mult = {}
    word_set = {name(w): w for w in words}
    for u in words:
        for v in words:
            if len(u) + len(v) <= max_word_length:
                mult[(name(u), name(v))] = {name(u + v): 1}
    algebra = FiniteDga(ring, basis, diff, mult)
    ideal = IdealData(
        [name(w) for w in words if any(l.startswith("x") for l in w)]
    )
    return algebra, ideal


def random_dga_fixture(rng):
    """A random dga-with-ideal satisfying the vanishing hypothesis.

    Rejection-samples truncated word algebras; the returned fixture always
    passes hypothesis_check.
    """
    while True:
        if rng.random() < 0.3:
            pairs = [rng.randint(0, 2)]
            length = 3
        else:
            pairs = [rng.randint(0, 2) for _ in range(rng.randint(1, 2))]
            length = 2
        extra = [rng.randint(0, 3)] if rng.random() < 0.5 else []
        algebra, ideal = truncated_word_dga(pairs, extra, max_word_length=length)
        if hypothesis_check(algebra, ideal).ok:
            return algebra, ideal
