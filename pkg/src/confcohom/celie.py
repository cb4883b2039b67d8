"""The Lie operad at small scale, twisted Lie algebras, and their
Chevalley-Eilenberg complexes.

Lie words are binary bracket trees with distinct integer leaf labels,
normalized into the left-normed basis (smallest label anchored leftmost)
using antisymmetry and Jacobi.  Tensoring a twisted commutative algebra
aritywise with the Lie operad yields a twisted Lie algebra; its CE chains
give an independent route to the configuration-space complexes.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .exactalg import ExactMatrix, GradedComplex, cohomology
from .partitions import SetPartition, enumerate_partitions
from .tcdga import TcdgaError, _addmul

CE_DEFAULT_MAX_N = 5


class LieError(ValueError):
    pass


def is_leaf(word):
    return isinstance(word, int)


def leaves(word):
    if is_leaf(word):
        return (word,)
    return leaves(word[0]) + leaves(word[1])


def min_leaf(word):
    return min(leaves(word))


class LieWord:
    """A bracket word with distinct leaf labels; hashable wrapper."""

    __slots__ = ("tree",)

    def __init__(self, tree):
        labels = leaves(tree)
        if len(set(labels)) != len(labels):
            raise LieError("duplicate leaf labels in %r" % (tree,))
        self.tree = tree

    def __eq__(self, other):
        return isinstance(other, LieWord) and self.tree == other.tree

    def __hash__(self):
        return hash(self.tree)

    def __repr__(self):
        return "LieWord(%s)" % (render_word(self.tree),)


def render_word(tree):
    if is_leaf(tree):
        return str(tree)
    return "[%s,%s]" % (render_word(tree[0]), render_word(tree[1]))


def _combo_bracket(left_combo, right_combo):
    out = {}
    for u, cu in left_combo.items():
        for v, cv in right_combo.items():
            _addmul(out, _bracket_basis(u, v), cu * cv)
    return out


_bracket_cache = {}


def _bracket_basis(u, v):
    """Bracket of two normalized basis words, expanded in the basis."""
    key = (u, v)
    cached = _bracket_cache.get(key)
    if cached is not None:
        return dict(cached)
    if min_leaf(u) > min_leaf(v):
        out = {w: -c for w, c in _bracket_basis(v, u).items()}
    elif is_leaf(v):
        out = {(u, v): 1}
    else:
        v1, v2 = v
        # [u,[v1,v2]] = [[u,v1],v2] - [[u,v2],v1]
        out = {}
        _addmul(out, _combo_bracket(_bracket_basis(u, v1), {v2: 1}), 1)
        _addmul(out, _combo_bracket(_bracket_basis(u, v2), {v1: 1}), -1)
    _bracket_cache[key] = dict(out)
    return out


def normalize_word(word):
    """Expansion of a word in the left-normed basis: {basis tree: coefficient}."""
    tree = word.tree if isinstance(word, LieWord) else word
    labels = leaves(tree)
    if len(set(labels)) != len(labels):
        raise LieError("duplicate leaf labels in %r" % (tree,))

    def rec(t):
        if is_leaf(t):
            return {t: 1}
        return _combo_bracket(rec(t[0]), rec(t[1]))

    return rec(tree)


def lie_basis(labels):
    """Left-normed basis words on a label set: smallest label leftmost,
    the rest appended in each possible order; (n-1)! words."""
    labels = sorted(labels)
    if not labels:
        raise LieError("empty label set")
    first, rest = labels[0], labels[1:]
    out = []
    for perm in itertools.permutations(rest):
        w = first
        for x in perm:
            w = (w, x)
        out.append(w)
    return out


def lie_action(perm, tree):
    """Relabel leaves by a permutation (1-based image tuple) and normalize."""

    def relabel(t):
        if is_leaf(t):
            return perm[t - 1]
        return (relabel(t[0]), relabel(t[1]))

    return normalize_word(relabel(tree))


def lie_character(n):
    """Character of the symmetric-group action on bracket words with n leaves."""
    from .partitions import cycle_type_representative
    from .symfunc import cycle_types

    basis = lie_basis(range(1, n + 1))
    pos = {w: i for i, w in enumerate(basis)}
    table = {}
    for ct in cycle_types(n):
        g = cycle_type_representative(n, ct)
        tr = Fraction(0)
        for w in basis:
            tr += lie_action(g, w).get(w, 0)
        table[ct] = tr
    return table


# ---------------------------------------------------------------------------
# twisted Lie algebras and Chevalley-Eilenberg chains


class TwistedLie:
    """The aritywise tensor of a twisted algebra with the Lie operad.

    Components are indexed by finite label sets S: coefficients are the
    algebra's arity-|S| component transported along the order-preserving
    bijection, tensored with bracket words on S.  For the comparison with
    the configuration-space complex, feed in the suspended algebra.
    """

    def __init__(self, algebra):
        if algebra.mode != "twisted":
            raise TcdgaError("a twisted-mode algebra is required")
        self.algebra = algebra
        self.max_size = algebra.max_arity

    def component_basis(self, block):
        """Basis [(name, word, degree)] at a sorted label tuple."""
        size = len(block)
        if size > self.max_size:
            raise TcdgaError("block size %d exceeds the algebra arity bound" % size)
        out = []
        for name, deg in self.algebra.components[size]:
            for w in lie_basis(block):
                out.append((name, w, deg))
        return out

    def bracket(self, block_a, block_b, elem_a, elem_b):
        """[g(A), g(B)] -> g(A u B) on basis pairs (name, word)."""
        algebra = self.algebra
        na, nb = len(block_a), len(block_b)
        name_a, word_a = elem_a
        name_b, word_b = elem_b
        prod = algebra.multiply(na, nb, {name_a: 1}, {name_b: 1})
        if not prod:
            return {}
        concat = list(block_a) + list(block_b)
        ranks = {e: r + 1 for r, e in enumerate(sorted(concat))}
        sortperm = tuple(ranks[e] for e in concat)
        if sortperm != tuple(range(1, na + nb + 1)):
            prod = algebra.act(na + nb, sortperm, prod)
        words = _bracket_basis(word_a, word_b)
        out = {}
        for cname, cv in prod.items():
            for w, wv in words.items():
                key = (cname, w)
                acc = out.get(key, 0) + cv * wv
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
        return out

    def validate_bracket(self, max_labels=3):
        """Antisymmetry and Jacobi with Koszul signs on small label sets."""
        failures = []
        labels = list(range(1, max_labels + 1))
        singletons = [(x,) for x in labels]
        for a, b in itertools.permutations(singletons, 2):
            for xa in self.component_basis(a):
                for xb in self.component_basis(b):
                    da, db = xa[2], xb[2]
                    lhs = self.bracket(b, a, (xb[0], xb[1]), (xa[0], xa[1]))
                    rhs = self.bracket(a, b, (xa[0], xa[1]), (xb[0], xb[1]))
                    sign = -1 if (da * db) % 2 == 0 else 1
                    scaled = {k: sign * v for k, v in rhs.items()}
                    if lhs != scaled:
                        failures.append("antisymmetry fails on %r, %r" % (xa, xb))
        if max_labels >= 3:
            a, b, c = (1,), (2,), (3,)
            for xa in self.component_basis(a):
                for xb in self.component_basis(b):
                    for xc in self.component_basis(c):
                        da, db = xa[2], xb[2]
                        ab = self.bracket(a, b, (xa[0], xa[1]), (xb[0], xb[1]))
                        lhs = {}
                        for key, v in ab.items():
                            _addmul(lhs, self.bracket((1, 2), c, key, (xc[0], xc[1])), v)
                        bc = self.bracket(b, c, (xb[0], xb[1]), (xc[0], xc[1]))
                        term1 = {}
                        for key, v in bc.items():
                            _addmul(term1, self.bracket(a, (2, 3), (xa[0], xa[1]), key), v)
                        ac = self.bracket(a, c, (xa[0], xa[1]), (xc[0], xc[1]))
                        term2 = {}
                        for key, v in ac.items():
                            _addmul(term2, self.bracket(b, (1, 3), (xb[0], xb[1]), key), v)
                        # graded Leibniz form: [[x,y],z] = [x,[y,z]] - (-1)^{|x||y|}[y,[x,z]]
                        rhs = dict(term1)
                        sign = -1 if (da * db) % 2 == 0 else 1
                        _addmul(rhs, term2, sign)
                        if lhs != rhs:
                            failures.append("Jacobi fails on %r, %r, %r" % (xa, xb, xc))
        return failures


def twisted_lie(algebra):
    return TwistedLie(algebra)


class CEComplex:
    """Chevalley-Eilenberg chains of a twisted Lie algebra in one arity.

    Basis: partitions of {1..n} with each block decorated by a shifted
    component basis element.  Cohomological grading; the differential sums
    the internal differentials and the pairwise brackets, factors ordered
    by block minimum with Koszul signs computed from shifted degrees.
    """

    def __init__(self, lie, n, max_n=None):
        bound = CE_DEFAULT_MAX_N if max_n is None else max_n
        if n > bound:
            from .partitions import ScaleBoundError

            raise ScaleBoundError(
                "n=%d exceeds the chain-complex scale bound %d (pass max_n to raise it)" % (n, bound)
            )
        self.lie = lie
        self.n = n
        algebra = lie.algebra
        ring = algebra.ring

        basis = []  # (partition, tuple of (name, word)), with degrees
        for part in enumerate_partitions(n, max_n=max(n, 9)):
            blocks = part.blocks()
            factors = [lie.component_basis(b) for b in blocks]
            for combo in itertools.product(*factors):
                decoration = tuple((name, w) for name, w, _ in combo)
                degree = sum(deg - 1 for _, _, deg in combo)
                basis.append((part, decoration, degree))

        by_degree = {}
        for part, deco, deg in basis:
            by_degree.setdefault(deg, []).append((part, deco))
        index = {}
        for deg, items in by_degree.items():
            for i, key in enumerate(items):
                index[key] = (deg, i)
        self.by_degree = by_degree
        self.index = index

        entries = {deg: {} for deg in by_degree}
        for part, deco in ((p, d) for deg, items in by_degree.items() for p, d in items):
            deg, col = index[(part, deco)]
            blocks = part.blocks()
            shifted = [algebra.degree[len(blocks[i])][deco[i][0]] - 1 for i in range(len(blocks))]
            # internal differentials (shift flips the sign of d)
            for i in range(len(blocks)):
                image = algebra.diff.get(len(blocks[i]), {}).get(deco[i][0])
                if not image:
                    continue
                sign = -1 if sum(shifted[:i]) % 2 else 1
                sign = -sign  # the differential flips sign on the shifted factor
                for dst, coeff in image.items():
                    new_deco = deco[:i] + ((dst, deco[i][1]),) + deco[i + 1 :]
                    ddeg, row = index[(part, new_deco)]
                    if ddeg != deg + 1:
                        raise TcdgaError("internal CE differential is not of degree +1")
                    key = (row, col)
                    entries[deg][key] = entries[deg].get(key, 0) + sign * coeff
            # brackets of pairs of factors: the shifted bracket is an odd
            # operator, so applying it at slot i crosses the prefix
            for i in range(len(blocks)):
                for j in range(i + 1, len(blocks)):
                    prefix = -1 if sum(shifted[:i]) % 2 else 1
                    between = sum(shifted[i + 1 : j])
                    koszul = prefix * (-1 if (shifted[j] * between) % 2 else 1)
                    # decalage sign of the shifted bracket
                    dec = -1 if shifted[i] % 2 else 1
                    got = self.lie.bracket(blocks[i], blocks[j], deco[i], deco[j])
                    if not got:
                        continue
                    merged_blocks = list(blocks)
                    merged_blocks[i] = tuple(sorted(blocks[i] + blocks[j]))
                    del merged_blocks[j]
                    new_part = SetPartition.from_blocks(n, merged_blocks)
                    for (cname, w), coeff in got.items():
                        new_deco = deco[:i] + ((cname, w),) + deco[i + 1 : j] + deco[j + 1 :]
                        ddeg, row = index[(new_part, new_deco)]
                        if ddeg != deg + 1:
                            raise TcdgaError("CE bracket term is not of degree +1")
                        key = (row, col)
                        val = entries[deg].get(key, 0) + koszul * dec * coeff
                        if val:
                            entries[deg][key] = val
                        else:
                            entries[deg].pop(key, None)

        ranks = {deg: len(items) for deg, items in by_degree.items()}
        labels = {
            deg: [(part, deco) for part, deco in items] for deg, items in by_degree.items()
        }
        diffs = {}
        for deg, ent in entries.items():
            if ent:
                diffs[deg] = ExactMatrix(ring, len(by_degree.get(deg + 1, [])), len(by_degree[deg]), ent)
        self.total = GradedComplex(ring, ranks, diffs, labels)

    def cohomology(self):
        return cohomology(self.total)

    def equivariant_action(self, perm):
        """The permutation action: relabel words, transport coefficients,
        reorder block factors with Koszul signs."""
        from .partitions import act

        algebra = self.lie.algebra
        out = {}
        for deg, items in self.by_degree.items():
            entries = {}
            for col, (part, deco) in enumerate(items):
                blocks = part.blocks()
                sizes = [len(b) for b in blocks]
                new_part = act(perm, part)
                image_blocks = [tuple(sorted(perm[e - 1] for e in b)) for b in blocks]
                order = sorted(range(len(blocks)), key=lambda s: image_blocks[s][0])
                place = {s: p for p, s in enumerate(order)}
                shifted = [algebra.degree[sizes[s]][deco[s][0]] - 1 for s in range(len(blocks))]
                koszul = 1
                for a in range(len(blocks)):
                    for b in range(a + 1, len(blocks)):
                        if place[a] > place[b] and shifted[a] % 2 and shifted[b] % 2:
                            koszul = -koszul
                # transport each factor: coefficient by the standardized
                # permutation, word by relabeling
                factor_images = []
                for s in range(len(blocks)):
                    name, word = deco[s]
                    sigma = _standardize_block(blocks[s], perm)
                    coeff_img = algebra.act(sizes[s], sigma, {name: 1})
                    word_img = lie_action(perm, word)
                    factor_images.append((coeff_img, word_img))
                for combo in itertools.product(
                    *(
                        [
                            ((cn, cw), cv * wv)
                            for cn, cv in sorted(ci.items())
                            for cw, wv in sorted(wi.items(), key=lambda kv: repr(kv[0]))
                        ]
                        for ci, wi in factor_images
                    )
                ):
                    coeff = koszul
                    new_deco = [None] * len(blocks)
                    for s, (pair, v) in enumerate(combo):
                        coeff *= v
                        new_deco[place[s]] = pair
                    ddeg, row = self.index[(new_part, tuple(new_deco))]
                    if ddeg != deg:
                        raise TcdgaError("the action does not preserve CE degree")
                    key = (row, col)
                    acc = entries.get(key, 0) + coeff
                    if acc:
                        entries[key] = acc
                    else:
                        entries.pop(key, None)
            out[deg] = ExactMatrix(
                self.total.ring, len(items), len(items), entries
            )
        return out


def _standardize_block(block, perm):
    image = [perm[e - 1] for e in block]
    ranks = {e: i + 1 for i, e in enumerate(sorted(image))}
    return tuple(ranks[e] for e in image)


def ce_complex(lie, n, max_n=None):
    return CEComplex(lie, n, max_n)


def ce_homology(lie, n, max_n=None):
    """Cohomology of the CE chains in the complex's own (cohomological) grading."""
    return CEComplex(lie, n, max_n).cohomology()


class ComparisonReport:
    def __init__(self, n, cf_summary, ce_summary, cf_characters=None, ce_characters=None):
        self.n = n
        self.cf_summary = cf_summary
        self.ce_summary = ce_summary
        self.cf_characters = cf_characters
        self.ce_characters = ce_characters

    @property
    def dims_match(self):
        return self.cf_summary == self.ce_summary

    @property
    def characters_match(self):
        if self.cf_characters is None or self.ce_characters is None:
            return None
        return self.cf_characters == self.ce_characters

    @property
    def ok(self):
        return self.dims_match and self.characters_match is not False

    def to_json(self):
        def dump(summary):
            return [
                {"degree": d, "free_rank": summary.free_rank(d), "torsion": list(summary.torsion(d))}
                for d in summary.degrees()
            ]

        out = {
            "n": self.n,
            "cf": dump(self.cf_summary),
            "ce": dump(self.ce_summary),
            "dims_match": self.dims_match,
        }
        if self.cf_characters is not None:
            out["characters_match"] = self.characters_match
        return out

    def __repr__(self):
        return "ComparisonReport(n=%d, dims_match=%s, characters_match=%s)" % (
            self.n,
            self.dims_match,
            self.characters_match,
        )


def compare_cf_ce(algebra, n, with_characters=True, max_n=None):
    """Compare the configuration-space complex on the full diagonal family
    against the CE chains of the suspended algebra tensored with Lie."""
    from .cfcd import cf_complex, characters as cf_characters_of, total_cohomology
    from .exactalg import EndomorphismTracer
    from .partitions import cycle_type_representative, named_upset
    from .symfunc import cycle_types
    from .tcdga import suspension

    if n == 1:
        from .partitions import UpSet

        u = UpSet(1, [])
    else:
        u = named_upset("full", n)
    bar = cf_complex(u, algebra)
    cf_h = total_cohomology(bar)
    lie = twisted_lie(suspension(algebra))
    ce = ce_complex(lie, n, max_n)
    ce_h = ce.cohomology()
    cf_table = ce_table = None
    if with_characters:
        if algebra.ring != "Q":
            raise TcdgaError("character comparison requires Q coefficients")
        from .cfcd import CharacterTable

        cf_table = cf_characters_of(bar)
        tracer = EndomorphismTracer(ce.total.to_ring("Q"))
        by_degree = {}
        for ct in cycle_types(n):
            g = cycle_type_representative(n, ct)
            for d, v in tracer.traces(ce.equivariant_action(g)).items():
                if v:
                    by_degree.setdefault(d, {})[ct] = v
        ce_table = CharacterTable(n, by_degree)
    return ComparisonReport(n, cf_h, ce_h, cf_table, ce_table)
