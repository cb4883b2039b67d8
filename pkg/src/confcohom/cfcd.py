"""Configuration-space complexes over the partition lattice.

Given a finite twisted (or shuffle) algebra A and an upward-closed family
of diagonals U, this module builds the coefficient functor
T -> A(T_1) x ... x A(T_k) on partitions, the bar complexes CF(U, A) and
CD(U, A), their total cohomology, the first page of the block-size
filtration, equivariant characters, and the direct closed-form evaluation
available for multiplication-free coefficients.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .exactalg import (
    CohomologySummary,
    EndomorphismTracer,
    ExactMatrix,
    GradedComplex,
    cohomology,
)
from .partitions import (
    SetPartition,
    UpSet,
    act,
    cycle_type_representative,
    join_closure,
    leq,
    lower_interval,
)
from .posetcx import BarComplex, FinitePoset, PosetFunctor, order_complex
from .symfunc import cycle_types as _cycle_types, z_lambda
from .tcdga import TcdgaError, _addmul


def _standardize(block, perm=None):
    """Permutation of {1..|block|} induced by a permutation of the
    ambient set restricted to the block (identity when perm is None)."""
    if perm is None:
        return tuple(range(1, len(block) + 1))
    image = [perm[e - 1] for e in block]
    ranks = {e: i + 1 for i, e in enumerate(sorted(image))}
    return tuple(ranks[e] for e in image)


def _tensor_basis(algebra, part):
    """Basis tuples of A(B_1) x ... x A(B_k), blocks by increasing minimum,
    factors in declared basis order.  Returns (tuples, degree map)."""
    blocks = part.blocks()
    factors = [algebra.components[len(b)] for b in blocks]
    tuples = []
    degrees = {}
    for combo in itertools.product(*factors):
        names = tuple(name for name, _ in combo)
        tuples.append(names)
        degrees[names] = sum(deg for _, deg in combo)
    return tuples, degrees


def _tensor_complex(algebra, part):
    """The coefficient complex at a partition, as a GradedComplex with
    basis-tuple labels."""
    tuples, degrees = _tensor_basis(algebra, part)
    blocks = part.blocks()
    sizes = [len(b) for b in blocks]
    by_degree = {}
    for t in tuples:
        by_degree.setdefault(degrees[t], []).append(t)
    pos = {}
    for deg, ts in by_degree.items():
        for i, t in enumerate(ts):
            pos[t] = (deg, i)
    ranks = {deg: len(ts) for deg, ts in by_degree.items()}
    entries_by_degree = {deg: {} for deg in by_degree}
    for t in tuples:
        deg = degrees[t]
        col = pos[t][1]
        running = 0
        for slot, name in enumerate(t):
            image = algebra.diff.get(sizes[slot], {}).get(name)
            if image:
                sign = -1 if running % 2 else 1
                for dst, coeff in image.items():
                    new = t[:slot] + (dst,) + t[slot + 1 :]
                    ddeg, row = pos[new]
                    if ddeg != deg + 1:
                        raise TcdgaError("tensor differential is not of degree +1")
                    key = (row, col)
                    entries_by_degree[deg][key] = entries_by_degree[deg].get(key, 0) + sign * coeff
            running += algebra.degree[sizes[slot]][name]
    diffs = {}
    for deg, entries in entries_by_degree.items():
        if entries:
            diffs[deg] = ExactMatrix(
                algebra.ring, len(by_degree.get(deg + 1, [])), len(by_degree[deg]), entries
            )
    labels = {deg: list(ts) for deg, ts in by_degree.items()}
    return GradedComplex(algebra.ring, ranks, diffs, labels)


def _single_merge_table(algebra, part, i, j):
    """Linear map of a single block merge (blocks i < j, block-min order) as
    {source tuple: {target tuple: coeff}}.  Returns (table, merged partition)."""
    blocks = part.blocks()
    merged_blocks = list(blocks)
    bi, bj = blocks[i], blocks[j]
    merged_blocks[i] = tuple(sorted(bi + bj))
    del merged_blocks[j]
    target = SetPartition.from_blocks(part.n, merged_blocks)
    sizes = [len(b) for b in blocks]
    tuples, _ = _tensor_basis(algebra, part)
    degmap = [algebra.degree[s] for s in sizes]

    sortperm = None
    if algebra.mode == "twisted":
        concat = list(bi) + list(bj)
        ranks = {e: r + 1 for r, e in enumerate(sorted(concat))}
        sortperm = tuple(ranks[e] for e in concat)

    table = {}
    for t in tuples:
        di = degmap[i][t[i]]
        dj = degmap[j][t[j]]
        between = sum(degmap[s][t[s]] for s in range(i + 1, j))
        koszul = -1 if (dj * between) % 2 else 1
        prod = algebra.multiply(sizes[i], sizes[j], {t[i]: 1}, {t[j]: 1})
        if not prod:
            continue
        if sortperm is not None and sortperm != tuple(range(1, len(sortperm) + 1)):
            prod = algebra.act(sizes[i] + sizes[j], sortperm, prod)
        image = {}
        for w, coeff in prod.items():
            new = t[:i] + (w,) + t[i + 1 : j] + t[j + 1 :]
            image[new] = image.get(new, 0) + koszul * coeff
        image = {k: v for k, v in image.items() if v}
        if image:
            table[t] = image
    return table, target


def _compose_tables(second, first):
    """second o first on {src: {mid: coeff}} tables."""
    out = {}
    for src, mid_img in first.items():
        acc = {}
        for mid, c in mid_img.items():
            _addmul(acc, second.get(mid, {}), c)
        if acc:
            out[src] = acc
    return out


def _coarsening_table(algebra, source, target):
    """Composite merge table for source <= target, along the canonical path
    that repeatedly merges the two lowest blocks landing in one target block."""
    table = None
    current = source
    while current != target:
        blocks = current.blocks()
        tgt_of = {}
        for b, block in enumerate(target.blocks()):
            for e in block:
                tgt_of[e] = b
        pair = None
        for i in range(len(blocks)):
            for j in range(i + 1, len(blocks)):
                if tgt_of[blocks[i][0]] == tgt_of[blocks[j][0]]:
                    pair = (i, j)
                    break
            if pair:
                break
        step, current = _single_merge_table(algebra, current, *pair)
        table = step if table is None else _compose_tables(step, table)
    return table if table is not None else None


def _table_to_matrices(table, source_cx, target_cx):
    """Convert a name-tuple table into per-degree matrices."""
    spos = {}
    for deg in source_cx.degrees():
        for i, lab in enumerate(source_cx.basis_labels[deg]):
            spos[lab] = (deg, i)
    tpos = {}
    for deg in target_cx.degrees():
        for i, lab in enumerate(target_cx.basis_labels[deg]):
            tpos[lab] = (deg, i)
    entries = {}
    for src, img in (table or {}).items():
        sdeg, col = spos[src]
        for dst, coeff in img.items():
            tdeg, row = tpos[dst]
            if tdeg != sdeg:
                raise TcdgaError("coarsening map does not preserve total degree")
            entries.setdefault(sdeg, {})[(row, col)] = coeff
    out = {}
    for deg in source_cx.degrees():
        out[deg] = ExactMatrix(
            source_cx.ring,
            target_cx.rank(deg),
            source_cx.rank(deg),
            entries.get(deg, {}),
        )
    return out


def _action_table(algebra, part, perm):
    """Action of a permutation: {source tuple at part: {target tuple at g.part: coeff}}."""
    blocks = part.blocks()
    sizes = [len(b) for b in blocks]
    target = act(perm, part)
    image_blocks = [tuple(sorted(perm[e - 1] for e in b)) for b in blocks]
    order = sorted(range(len(blocks)), key=lambda s: image_blocks[s][0])
    place = {s: p for p, s in enumerate(order)}
    degmap = [algebra.degree[s] for s in sizes]
    tuples, _ = _tensor_basis(algebra, part)
    table = {}
    for t in tuples:
        transported = []
        for s, name in enumerate(t):
            sigma = _standardize(blocks[s], perm)
            transported.append(algebra.act(sizes[s], sigma, {name: 1}))
        degs = [degmap[s][t[s]] for s in range(len(t))]
        koszul = 1
        for a in range(len(t)):
            for b in range(a + 1, len(t)):
                if place[a] > place[b] and degs[a] % 2 and degs[b] % 2:
                    koszul = -koszul
        image = {}
        slots = [None] * len(t)
        for combo in itertools.product(*(sorted(v.items()) for v in transported)):
            coeff = koszul
            new = [None] * len(t)
            for s, (name, c) in enumerate(combo):
                coeff *= c
                new[place[s]] = name
            key = tuple(new)
            image[key] = image.get(key, 0) + coeff
        image = {k: v for k, v in image.items() if v}
        if image:
            table[t] = image
    return table, target


def phi_functor(algebra, n, elements=None, validate=True):
    """The coefficient functor on partitions of {1..n} (or on a sub-poset).

    Coarsening maps multiply the merged blocks' coefficients, transported
    by order-preserving identifications; in twisted mode the sorting
    permutation acts after the product, and Koszul signs track the tensor
    reordering.
    """
    if n > algebra.max_arity:
        raise TcdgaError("n=%d exceeds the algebra's maximal arity %d" % (n, algebra.max_arity))
    if elements is None:
        from .partitions import enumerate_partitions

        elements = enumerate_partitions(n)
    carrier = FinitePoset.from_partitions(elements)
    at = {p: _tensor_complex(algebra, p) for p in carrier.elements}
    maps = {}
    for x in carrier.elements:
        for y in carrier.elements:
            if x != y and leq(x, y):
                table = _coarsening_table(algebra, x, y)
                maps[(x, y)] = _table_to_matrices(table, at[x], at[y])

    action = None
    if algebra.mode == "twisted":
        def action(perm, part):
            table, target = _action_table(algebra, part, perm)
            return _table_to_matrices(table, at[part], at[target])

    return PosetFunctor(
        carrier, at, maps, action=action, act_on_element=act, validate=validate
    )


def _carrier_elements(upset):
    members = upset.members()
    bottom = SetPartition.bottom(upset.n)
    if bottom not in members:
        members = [bottom] + members
    return members


def cf_complex(upset, algebra, validate=True):
    """The bar complex whose cohomology plays the role of compact-support
    cohomology of the generalized configuration space attached to U."""
    functor = phi_functor(algebra, upset.n, _carrier_elements(upset), validate=validate)
    return BarComplex(upset.members(), functor, "Btilde")


def cd_complex(upset, algebra, validate=True):
    """The bar complex for the discriminant (the union of the diagonals)."""
    functor = phi_functor(algebra, upset.n, _carrier_elements(upset), validate=validate)
    return BarComplex(upset.members(), functor, "B")


def total_cohomology(bar, ring=None):
    total = bar.total
    if ring is not None and ring != total.ring:
        total = total.to_ring(ring)
    return cohomology(total)


# ---------------------------------------------------------------------------
# the block-count filtration and its first page


class E1Entry:
    def __init__(self, part, p, summary, characters=None):
        self.partition = part
        self.p = p
        self.summary = summary  # keyed by total degree
        self.characters = characters

    def __repr__(self):
        return "E1Entry(T=%r, p=%d, %r)" % (self.partition, self.p, self.summary)


class E1Page:
    """First-page data, indexed by partitions in the join closure.

    Entries are keyed by the partition T; the filtration degree is
    p = n - |T| and summaries are graded by total degree p + q.
    """

    def __init__(self, mode, n, entries):
        self.mode = mode
        self.n = n
        self.entries = entries

    def dimension(self, p, q):
        total = 0
        for entry in self.entries.values():
            if entry.p == p:
                total += entry.summary.free_rank(p + q)
        return total

    def total_dims(self):
        """Sum over the filtration: total degree -> dimension."""
        out = {}
        for entry in self.entries.values():
            for d in entry.summary.degrees():
                out[d] = out.get(d, 0) + entry.summary.free_rank(d)
        return {d: v for d, v in out.items() if v}

    def character_totals(self):
        """Aggregate characters: degree -> cycle type -> trace."""
        out = {}
        for entry in self.entries.values():
            if entry.characters is None:
                continue
            for d, by_type in entry.characters.items():
                acc = out.setdefault(d, {})
                for ct, v in by_type.items():
                    acc[ct] = acc.get(ct, 0) + v
        return out


def _graded_piece(bar, part):
    """The sub-quotient of the bar complex spanned by chains with maximum T
    (the associated graded block of the block-count filtration at T)."""
    carrier = bar.functor.carrier
    tidx = carrier.index[part]
    keep = {}
    ranks = {}
    labels = {}
    for t, basis in bar.basis_by_degree.items():
        sel = [
            k
            for k, (chain, q, i) in enumerate(basis)
            if (chain and chain[-1] == tidx) or (not chain and part == bar.bottom)
        ]
        if sel:
            keep[t] = {k: pos for pos, k in enumerate(sel)}
            ranks[t] = len(sel)
            labels[t] = [bar.total.basis_labels[t][k] for k in sel]
    diffs = {}
    for t, index_map in keep.items():
        nxt = keep.get(t + 1)
        if not nxt:
            continue
        mat = bar.total.differentials.get(t)
        if mat is None:
            continue
        entries = {}
        for (r, c), v in mat.entries.items():
            if c in index_map and r in nxt:
                entries[(nxt[r], index_map[c])] = v
        if entries:
            diffs[t] = ExactMatrix(bar.ring, ranks[t + 1], ranks[t], entries)
    return GradedComplex(bar.ring, ranks, diffs, labels), keep


def _restrict_action(bar, mats, keep):
    out = {}
    for t, index_map in keep.items():
        m = mats.get(t)
        entries = {}
        if m is not None:
            for (r, c), v in m.entries.items():
                if c in index_map and r in index_map:
                    entries[(index_map[r], index_map[c])] = v
        out[t] = ExactMatrix("Q", len(index_map), len(index_map), entries)
    return out


def e1_page(bar, which=None, only_join_closure=True, with_characters=False, upset=None):
    """Cohomology of the associated graded of the block-count filtration.

    ``which`` is 'CF' for the flavor including the empty chain and 'CD'
    otherwise; it defaults to the bar complex's own flavor.  Entries are
    indexed by the join closure (with bottom for CF); passing
    only_join_closure=False computes an entry for every possible chain
    maximum, which is how the reduction to the join closure is tested.
    """
    if which is None:
        which = "CF" if bar.flavor == "Btilde" else "CD"
    if upset is None:
        n = bar.functor.carrier.elements[0].n
        upset = UpSet(n, list(bar.upset))
    n = upset.n
    if only_join_closure:
        parts = list(join_closure(upset, with_bottom=(which == "CF")))
    else:
        parts = list(bar.upset)
        if which == "CF":
            parts = [SetPartition.bottom(n)] + parts
    entries = {}
    for part in parts:
        piece, keep = _graded_piece(bar, part)
        summary = cohomology(piece)
        chars = None
        if with_characters:
            stab_types = [
                ct
                for ct in _cycle_types(n)
                if act(cycle_type_representative(n, ct), part) == part
            ]
            piece_q = piece.to_ring("Q")
            tracer = EndomorphismTracer(piece_q)
            chars = {}
            for ct in stab_types:
                g = cycle_type_representative(n, ct)
                mats = bar.equivariant_action(g)
                restricted = _restrict_action(bar, mats, keep)
                tr = tracer.traces(restricted)
                for d, v in tr.items():
                    if v:
                        chars.setdefault(d, {})[ct] = v
        entries[part] = E1Entry(part, n - part.num_blocks(), summary, chars)
    return E1Page(which, n, entries)


# ---------------------------------------------------------------------------
# characters of the total cohomology


class CharacterTable:
    """Class-function traces on cohomology: degree -> cycle type -> value."""

    def __init__(self, n, by_degree):
        self.n = n
        self.by_degree = {
            d: {tuple(ct): Fraction(v) for ct, v in table.items()}
            for d, table in by_degree.items()
        }

    def degrees(self):
        return sorted(self.by_degree)

    def value(self, degree, cycle_type):
        return self.by_degree.get(degree, {}).get(tuple(cycle_type), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, CharacterTable) or self.n != other.n:
            return False
        degrees = set(self.by_degree) | set(other.by_degree)
        for d in degrees:
            for ct in _cycle_types(self.n):
                if self.value(d, ct) != other.value(d, ct):
                    return False
        return True

    def __repr__(self):
        return "CharacterTable(n=%d, degrees=%s)" % (self.n, self.degrees())


def characters(bar, cycle_types=None):
    """Traces of the symmetric-group action on the cohomology of a bar complex.

    One representative permutation per cycle type (consecutive cycles).
    Requires twisted-mode coefficients over Q.
    """
    functor = bar.functor
    if functor.action is None:
        raise TcdgaError("characters require twisted-mode coefficients")
    if bar.ring != "Q":
        raise TcdgaError("characters are computed over Q")
    n = functor.carrier.elements[0].n
    if cycle_types is None:
        cycle_types = _cycle_types(n)
    tracer = EndomorphismTracer(bar.total)
    by_degree = {}
    for ct in cycle_types:
        g = cycle_type_representative(n, ct)
        traces = tracer.traces(bar.equivariant_action(g))
        for d, v in traces.items():
            if v:
                by_degree.setdefault(d, {})[ct] = v
    return CharacterTable(n, by_degree)


def invariants_dims(table):
    """Dimension of the invariant subspace per degree, by character averaging."""
    out = {}
    for d in table.degrees():
        acc = Fraction(0)
        for ct in _cycle_types(table.n):
            acc += table.value(d, ct) / z_lambda(ct)
        if acc.denominator != 1:
            raise ValueError("invariants dimension is not an integer in degree %d" % d)
        if acc:
            out[d] = int(acc)
    return out


# ---------------------------------------------------------------------------
# closed form for multiplication-free coefficients


def _poincare_power(ranks, k):
    """Graded ranks of the k-th tensor power of a graded module."""
    out = {0: 1}
    for _ in range(k):
        nxt = {}
        for d1, r1 in out.items():
            for d2, r2 in ranks.items():
                nxt[d1 + d2] = nxt.get(d1 + d2, 0) + r1 * r2
        out = nxt
    return out


def _merge_torsion(factors):
    """Normalize a multiset of torsion orders into an invariant-factor chain."""
    primes = {}
    for f in factors:
        x = f
        p = 2
        while p * p <= x:
            if x % p == 0:
                e = 0
                while x % p == 0:
                    x //= p
                    e += 1
                primes.setdefault(p, []).append(p**e)
            p += 1
        if x > 1:
            primes.setdefault(x, []).append(x)
    if not primes:
        return ()
    depth = max(len(v) for v in primes.values())
    for p in primes:
        primes[p].sort()
    chain = []
    for i in range(depth):
        d = 1
        for p, powers in primes.items():
            idx = len(powers) - depth + i
            if idx >= 0:
                d *= powers[idx]
        chain.append(d)
    return tuple(chain)


def _tensor_power_action_trace(module, part, perm):
    """Graded traces {degree: trace} of a permutation acting on the tensor
    power indexed by the blocks of a partition it preserves (trivial internal
    action, Koszul signs from reordering graded factors)."""
    blocks = part.blocks()
    image_blocks = [tuple(sorted(perm[e - 1] for e in b)) for b in blocks]
    place = {}
    for s, img in enumerate(image_blocks):
        place[s] = blocks.index(img)
    # basis of the tensor power: one graded generator per block factor
    gens = sorted(module.ranks)
    basis = []
    for combo in itertools.product(
        *[[(d, i) for d in gens for i in range(module.ranks[d])] for _ in blocks]
    ):
        basis.append(combo)
    traces = {}
    for combo in basis:
        target = [None] * len(blocks)
        for s in range(len(blocks)):
            target[place[s]] = combo[s]
        if tuple(target) != combo:
            continue
        degs = [d for d, _ in combo]
        sign = 1
        for a in range(len(blocks)):
            for b in range(a + 1, len(blocks)):
                if place[a] > place[b] and degs[a] % 2 and degs[b] % 2:
                    sign = -sign
        total = sum(degs)
        traces[total] = traces.get(total, 0) + sign
    return {d: Fraction(v) for d, v in traces.items() if v}


class ClosedFormResult:
    def __init__(self, summary, characters_table=None):
        self.summary = summary
        self.characters = characters_table


def iacyclic_closed_form(module, upset, which="CF", with_characters=False):
    """Direct evaluation of the cohomology of CF/CD for multiplication-free
    coefficients: a sum over the join closure of interval cohomology tensored
    with graded tensor powers.  No bar complex is built."""
    ring = module.ring
    n = upset.n
    with_bottom = which == "CF"
    closure = join_closure(upset, with_bottom=True)
    if with_bottom:
        parts = list(closure)
    else:
        bottom = SetPartition.bottom(n)
        parts = [p for p in closure if p != bottom]
    bottom = SetPartition.bottom(n)
    interval_data = {}
    for part in parts:
        below = lower_interval(closure.elements, part)
        if not with_bottom:
            below = [x for x in below if x != bottom]
        poset = FinitePoset.from_partitions(below)
        cx = order_complex(poset, "hatcheck" if with_bottom else "hat", ring)
        interval_data[part] = (poset, cx, cohomology(cx))

    grand = {}
    torsion_pool = {}
    for part in parts:
        _, _, h = interval_data[part]
        power = _poincare_power(module.poincare(), part.num_blocks())
        for q in h.degrees():
            rq = h.free_rank(q)
            tq = h.torsion(q)
            for p, mp in power.items():
                k = p + q
                if rq:
                    grand[k] = grand.get(k, 0) + rq * mp
                if tq and ring == "Z" and mp:
                    torsion_pool.setdefault(k, []).extend(list(tq) * mp)
    data = {}
    for k in set(grand) | set(torsion_pool):
        data[k] = (grand.get(k, 0), _merge_torsion(torsion_pool.get(k, [])))
    summary = CohomologySummary(ring, data)

    table = None
    if with_characters:
        if ring != "Q":
            raise TcdgaError("characters require Q coefficients")
        for ct in _cycle_types(n):
            if not upset.is_stable_under(cycle_type_representative(n, ct)):
                raise TcdgaError("characters require a symmetric-group-stable upset")
        by_degree = {}
        for ct in _cycle_types(n):
            g = cycle_type_representative(n, ct)
            for part in parts:
                if act(g, part) != part:
                    continue
                poset, cx, _ = interval_data[part]
                mats = {}
                for d in cx.degrees():
                    labels = cx.basis_labels[d]
                    pos = {lab: i for i, lab in enumerate(labels)}
                    entries = {}
                    for col, lab in enumerate(labels):
                        new = tuple(act(g, x) for x in lab)
                        entries[(pos[new], col)] = 1
                    mats[d] = ExactMatrix("Q", len(labels), len(labels), entries)
                interval_traces = EndomorphismTracer(cx.to_ring("Q")).traces(mats)
                power_traces = _tensor_power_action_trace(module, part, g)
                for q, trq in interval_traces.items():
                    if not trq:
                        continue
                    for p, trp in power_traces.items():
                        v = trq * trp
                        if v:
                            acc = by_degree.setdefault(p + q, {})
                            acc[ct] = acc.get(ct, 0) + v
        by_degree = {
            d: {ct: v for ct, v in tbl.items() if v}
            for d, tbl in by_degree.items()
        }
        table = CharacterTable(n, {d: t for d, t in by_degree.items() if t})
    return ClosedFormResult(summary, table)
