"""Order-complex cochain complexes of finite posets and bar complexes over
poset functors, with group equivariance.

The four order-complex variants are indexed by which extremal elements a
chain is required to contain: 'plain' (reduced cochains of the whole order
complex, with the empty chain in degree -1), 'hat' (chains through the top),
'check' (chains through the bottom), 'hatcheck' (chains through both; a
one-point poset yields a rank-one complex in degree 0).
"""

from __future__ import annotations

from .exactalg import ExactMatrix, GradedComplex, cohomology

VARIANTS = ("plain", "hat", "check", "hatcheck")


class PosetError(ValueError):
    pass


class FinitePoset:
    """Explicit finite poset: a deterministic element list plus the order relation."""

    def __init__(self, elements, leq_fn):
        self.elements = list(elements)
        if len(set(self.elements)) != len(self.elements):
            raise PosetError("duplicate elements")
        self.index = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        self._leq = [[False] * n for _ in range(n)]
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                if leq_fn(x, y):
                    self._leq[i][j] = True
        for i in range(n):
            if not self._leq[i][i]:
                raise PosetError("order is not reflexive")
            for j in range(n):
                if self._leq[i][j] and self._leq[j][i] and i != j:
                    raise PosetError("order is not antisymmetric")
                if self._leq[i][j]:
                    for k in range(n):
                        if self._leq[j][k] and not self._leq[i][k]:
                            raise PosetError("order is not transitive")
        self.strict_upper = [
            [j for j in range(n) if self._leq[i][j] and i != j] for i in range(n)
        ]

    def __len__(self):
        return len(self.elements)

    def leq(self, x, y):
        return self._leq[self.index[x]][self.index[y]]

    def leq_idx(self, i, j):
        return self._leq[i][j]

    def top(self):
        for i in range(len(self.elements)):
            if all(self._leq[j][i] for j in range(len(self.elements))):
                return self.elements[i]
        return None

    def bottom(self):
        for i in range(len(self.elements)):
            if all(self._leq[i][j] for j in range(len(self.elements))):
                return self.elements[i]
        return None

    def subposet(self, elements):
        keep = set(elements)
        return FinitePoset([e for e in self.elements if e in keep], self.leq)

    def product(self, other):
        elems = [(x, y) for x in self.elements for y in other.elements]
        return FinitePoset(
            elems,
            lambda a, b: self.leq(a[0], b[0]) and other.leq(a[1], b[1]),
        )

    @classmethod
    def from_partitions(cls, parts):
        from .partitions import leq as part_leq

        ordered = sorted(set(parts), key=lambda p: p.rgs)
        return cls(ordered, part_leq)

    def chains_between(self, lower_strict=None, upper_strict=None):
        """All strictly increasing chains (as index tuples) of elements that are
        strictly above lower_strict and strictly below upper_strict."""
        n = len(self.elements)
        lo = None if lower_strict is None else self.index[lower_strict]
        hi = None if upper_strict is None else self.index[upper_strict]
        pool = [
            i
            for i in range(n)
            if (lo is None or (self._leq[lo][i] and i != lo))
            and (hi is None or (self._leq[i][hi] and i != hi))
        ]
        chains = [()]
        stack = [((), pool)]
        while stack:
            chain, ext = stack.pop()
            for pos, i in enumerate(ext):
                nxt = chain + (i,)
                chains.append(nxt)
                upper = [j for j in ext if self._leq[i][j] and j != i]
                stack.append((nxt, upper))
        chains.sort(key=lambda c: (len(c), c))
        return chains


def order_complex(poset, variant, ring="Z"):
    """Cochain complex of an order-complex variant, as a GradedComplex.

    Degrees carry the reduced convention: a chain of j poset elements sits in
    degree j-1, with the empty chain contributing degree -1 for 'plain'.
    """
    if variant not in VARIANTS:
        raise PosetError("variant must be one of %s" % (VARIANTS,))
    top = poset.top()
    bottom = poset.bottom()
    if variant in ("hat", "hatcheck") and top is None:
        raise PosetError("variant %r needs a top element" % variant)
    if variant in ("check", "hatcheck") and bottom is None:
        raise PosetError("variant %r needs a bottom element" % variant)

    if variant == "plain":
        chains = poset.chains_between()
    elif variant == "hat":
        ti = poset.index[top]
        chains = [c + (ti,) for c in poset.chains_between(upper_strict=top)]
    elif variant == "check":
        bi = poset.index[bottom]
        chains = [(bi,) + c for c in poset.chains_between(lower_strict=bottom)]
    else:
        bi, ti = poset.index[bottom], poset.index[top]
        if bi == ti:
            chains = [(bi,)]
        else:
            chains = [
                (bi,) + c + (ti,)
                for c in poset.chains_between(lower_strict=bottom, upper_strict=top)
            ]
    chains.sort(key=lambda c: (len(c), c))
    by_degree = {}
    for c in chains:
        by_degree.setdefault(len(c) - 1, []).append(c)
    position = {}
    for d, cs in by_degree.items():
        for i, c in enumerate(cs):
            position[c] = i
    in_basis = set(chains)

    ranks = {d: len(cs) for d, cs in by_degree.items()}
    labels = {
        d: [tuple(poset.elements[i] for i in c) for c in cs] for d, cs in by_degree.items()
    }
    diffs = {}
    for d, cs in by_degree.items():
        entries = {}
        for row, chain in enumerate(cs):
            for i in range(len(chain)):
                face = chain[:i] + chain[i + 1 :]
                if face in in_basis:
                    entries[(row, position[face])] = (
                        entries.get((row, position[face]), 0) + (-1) ** i
                    )
        if entries and d - 1 in by_degree:
            diffs[d - 1] = ExactMatrix(
                ring, len(cs), len(by_degree[d - 1]), entries
            )
    return GradedComplex(ring, ranks, diffs, labels)


def order_complex_cohomology(poset, variant, ring="Z"):
    return cohomology(order_complex(poset, variant, ring))


class FunctorError(ValueError):
    pass


class PosetFunctor:
    """A functor from a finite poset to cochain complexes, with optional group action.

    ``at`` maps elements to GradedComplex values; ``maps`` holds, for each
    strictly comparable pair (x, y), the per-degree matrices of a chain map
    at(x) -> at(y).  ``action``, when present, is a callable (perm, x) ->
    per-degree matrices at(x) -> at(perm . x); the poset elements must then
    support the group action via ``act_on_element``.
    """

    def __init__(self, carrier, at, maps, action=None, act_on_element=None, validate=True):
        self.carrier = carrier
        self.at = dict(at)
        self.maps = dict(maps)
        self.action = action
        self.act_on_element = act_on_element
        for e in carrier.elements:
            if e not in self.at:
                raise FunctorError("no value at %r" % (e,))
        if validate:
            self.validate()

    def value(self, x):
        return self.at[x]

    def map(self, x, y):
        if x == y:
            return {
                d: ExactMatrix.identity(self.at[x].ring, self.at[x].rank(d))
                for d in self.at[x].degrees()
            }
        return self.maps[(x, y)]

    def validate(self):
        from .exactalg import check_chain_map

        elems = self.carrier.elements
        for x in elems:
            for y in elems:
                if x != y and self.carrier.leq(x, y):
                    if (x, y) not in self.maps:
                        raise FunctorError("missing map %r -> %r" % (x, y))
                    check_chain_map(self.maps[(x, y)], self.at[x], self.at[y])
        # functoriality on all composable pairs
        for x in elems:
            for y in elems:
                if x == y or not self.carrier.leq(x, y):
                    continue
                for z in elems:
                    if y == z or not self.carrier.leq(y, z):
                        continue
                    left = self.maps[(y, z)]
                    right = self.maps[(x, y)]
                    direct = self.maps[(x, z)]
                    for d in self.at[x].degrees():
                        lm = left.get(d)
                        rm = right.get(d)
                        dm = direct.get(d)
                        composite = None
                        if lm is not None and rm is not None:
                            composite = lm @ rm
                        want = dm
                        if composite is None:
                            composite = ExactMatrix.zeros(
                                self.at[x].ring, self.at[z].rank(d), self.at[x].rank(d)
                            )
                        if want is None:
                            want = ExactMatrix.zeros(
                                self.at[x].ring, self.at[z].rank(d), self.at[x].rank(d)
                            )
                        if composite != want:
                            raise FunctorError(
                                "functoriality fails along %r -> %r -> %r in degree %d"
                                % (x, y, z, d)
                            )


def constant_functor(carrier, ring="Q", value=None):
    """The constant functor; by default one copy of the ring in degree 0."""
    if value is None:
        value = GradedComplex(ring, {0: 1})
    ident = {d: ExactMatrix.identity(ring, value.rank(d)) for d in value.degrees()}
    maps = {}
    for x in carrier.elements:
        for y in carrier.elements:
            if x != y and carrier.leq(x, y):
                maps[(x, y)] = ident
    return PosetFunctor(carrier, {x: value for x in carrier.elements}, maps, validate=False)


class BarComplex:
    """Bar-type double complex over the chains of an upward-closed subset.

    flavor 'B': nonempty chains, horizontal degree |C|-1.
    flavor 'Btilde': all chains including the empty one (whose coefficients
    sit at the carrier bottom), horizontal degree |C|.

    The total differential is d_horizontal + (-1)^{horizontal} d_vertical;
    inserting an element at position i contributes (-1)^i, and only an
    insertion on top of the chain applies a coefficient map.
    """

    def __init__(self, upset_elements, functor, flavor):
        if flavor not in ("B", "Btilde"):
            raise PosetError("flavor must be 'B' or 'Btilde'")
        carrier = functor.carrier
        self.functor = functor
        self.flavor = flavor
        uset = set(upset_elements)
        for x in uset:
            if x not in carrier.index:
                raise PosetError("upset element %r is not in the carrier" % (x,))
            for j in carrier.strict_upper[carrier.index[x]]:
                if carrier.elements[j] not in uset:
                    raise PosetError("subset is not upward closed at %r" % (x,))
        self.upset = sorted(uset, key=lambda e: carrier.index[e])
        bottom = carrier.bottom()
        if flavor == "Btilde" and bottom is None:
            raise PosetError("flavor 'Btilde' needs a bottom element in the carrier")
        self.bottom = bottom

        uidx = sorted(carrier.index[x] for x in self.upset)
        self._uidx = uidx
        all_chains = []
        stack = [((), uidx)]
        while stack:
            chain, ext = stack.pop()
            for i in ext:
                nxt = chain + (i,)
                all_chains.append(nxt)
                stack.append((nxt, [j for j in ext if carrier.leq_idx(i, j) and j != i]))
        if flavor == "Btilde":
            all_chains.append(())
        all_chains.sort(key=lambda c: (len(c), c))
        self.chains = all_chains

        ring = None
        basis = []  # (chain, q, local index)
        self._chain_value = {}
        for chain in all_chains:
            value = functor.value(self._max_element(chain))
            ring = value.ring if ring is None else ring
            if value.ring != ring:
                raise FunctorError("mixed rings among coefficient complexes")
            self._chain_value[chain] = value
        self.ring = ring or "Q"

        h0 = 0 if flavor == "Btilde" else -1
        index = {}
        by_degree = {}
        labels = {}
        for chain in all_chains:
            h = len(chain) + h0
            value = self._chain_value[chain]
            for q in value.degrees():
                for i in range(value.rank(q)):
                    t = h + q
                    pos = len(by_degree.setdefault(t, []))
                    by_degree[t].append((chain, q, i))
                    index[(chain, q, i)] = pos
                    labels.setdefault(t, []).append(
                        (
                            tuple(carrier.elements[j] for j in chain),
                            value.basis_labels[q][i],
                        )
                    )
        self.basis_by_degree = by_degree
        self.basis_index = index
        self.horizontal_shift = h0

        diffs = {}
        for t, basis_t in by_degree.items():
            entries = {}
            for col, (chain, q, i) in enumerate(basis_t):
                h = len(chain) + h0
                value = self._chain_value[chain]
                # vertical part, with the horizontal-degree sign
                dmat = value.differentials.get(q)
                if dmat is not None:
                    sign = -1 if h % 2 else 1
                    for (r, c), v in dmat.entries.items():
                        if c == i:
                            row = index[(chain, q + 1, r)]
                            key = (row, col)
                            entries[key] = entries.get(key, 0) + sign * v
                # horizontal part: insert an element of U into the chain
                self._horizontal_entries(chain, q, i, col, index, entries)
            if entries:
                rank_next = len(by_degree.get(t + 1, []))
                diffs[t] = ExactMatrix(self.ring, rank_next, len(basis_t), entries)
        ranks = {t: len(b) for t, b in by_degree.items()}
        self.total = GradedComplex(self.ring, ranks, diffs, labels)

    def _max_element(self, chain):
        carrier = self.functor.carrier
        if chain:
            return carrier.elements[chain[-1]]
        return self.bottom

    def _horizontal_entries(self, chain, q, i, col, index, entries):
        carrier = self.functor.carrier
        for y in self._uidx:
            if y in chain:
                continue
            # find the unique insertion position, if the chain stays a chain
            pos = None
            ok = True
            for k, e in enumerate(chain):
                if carrier.leq_idx(y, e):
                    pos = k
                    break
                if not carrier.leq_idx(e, y):
                    ok = False
                    break
            if not ok:
                continue
            if pos is None:
                pos = len(chain)
            # all earlier elements must be strictly below y
            if any(not carrier.leq_idx(e, y) for e in chain[:pos]):
                continue
            new_chain = chain[:pos] + (y,) + chain[pos:]
            sign = -1 if pos % 2 else 1
            if pos == len(chain):
                # new maximum: apply the coefficient map
                mats = self.functor.map(self._max_element(chain), carrier.elements[y])
                m = mats.get(q)
                if m is None:
                    continue
                for (r, c), v in m.entries.items():
                    if c == i:
                        row = index[(new_chain, q, r)]
                        key = (row, col)
                        w = entries.get(key, 0) + sign * v
                        if w:
                            entries[key] = w
                        else:
                            entries.pop(key, None)
            else:
                row = index[(new_chain, q, i)]
                key = (row, col)
                w = entries.get(key, 0) + sign
                if w:
                    entries[key] = w
                else:
                    entries.pop(key, None)

    def cohomology(self):
        return cohomology(self.total)

    def debug_json(self):
        """Dump: per-degree basis labels and sparse differential triples."""
        out = {"flavor": self.flavor, "ring": self.ring, "degrees": []}
        for t in self.total.degrees():
            entry = {
                "degree": t,
                "basis": [
                    {"chain": [repr(x) for x in chain], "coefficient": repr(label)}
                    for chain, label in self.total.basis_labels[t]
                ],
            }
            mat = self.total.differentials.get(t)
            if mat is not None:
                entry["differential"] = [
                    [r, c, str(v)] for (r, c), v in sorted(mat.entries.items())
                ]
            out["degrees"].append(entry)
        return out

    def equivariant_action(self, perm):
        """Chain automorphism induced by a permutation preserving the upset.

        Requires the functor to carry a group action.  Returns per-degree
        matrices on the total complex.
        """
        functor = self.functor
        if functor.action is None or functor.act_on_element is None:
            raise FunctorError("the coefficient functor carries no group action")
        carrier = functor.carrier
        moved = {functor.act_on_element(perm, x) for x in self.upset}
        if moved != set(self.upset):
            raise PosetError("the permutation does not preserve the upset")
        out = {}
        for t, basis_t in self.basis_by_degree.items():
            entries = {}
            for col, (chain, q, i) in enumerate(basis_t):
                src = self._max_element(chain)
                mats = functor.action(perm, src)
                m = mats.get(q)
                if m is None:
                    continue
                new_chain = tuple(
                    carrier.index[functor.act_on_element(perm, carrier.elements[j])]
                    for j in chain
                )
                for (r, c), v in m.entries.items():
                    if c == i:
                        row = self.basis_index[(new_chain, q, r)]
                        entries[(row, col)] = v
            out[t] = ExactMatrix(
                self.ring, len(self.basis_by_degree.get(t, [])), len(basis_t), entries
            )
        return out


def bar_complex(upset_elements, functor, flavor):
    return BarComplex(upset_elements, functor, flavor)


def smash_check(p, q, ring="Q"):
    """Do the 'hatcheck' cohomology ranks of p x q match the graded tensor
    of the factors' ranks?  (A Kunneth consistency utility over Q.)"""
    hp = cohomology(order_complex(p, "hatcheck", ring))
    hq = cohomology(order_complex(q, "hatcheck", ring))
    hpq = cohomology(order_complex(p.product(q), "hatcheck", ring))
    expected = {}
    for a in hp.degrees():
        for b in hq.degrees():
            expected[a + b] = expected.get(a + b, 0) + hp.free_rank(a) * hq.free_rank(b)
    actual = {d: hpq.free_rank(d) for d in hpq.degrees()}
    return {d: r for d, r in expected.items() if r} == {d: r for d, r in actual.items() if r}
