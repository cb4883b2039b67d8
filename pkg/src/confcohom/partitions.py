"""Set partitions of {1..n}, the partition lattice, and upward-closed subsets.

Partitions are canonically encoded as restricted-growth strings over the
positions 0..n-1, which gives cheap hashing and a deterministic total
order.  User-facing blocks are 1-based, matching the JSON representation
[[1,2],[3]].
"""

from __future__ import annotations

import itertools

DEFAULT_MAX_N = 9  # Bell(9) = 21147; chain enumeration downstream grows much faster


class PartitionError(ValueError):
    pass


class ScaleBoundError(PartitionError):
    """A size cap was exceeded; callers may retry with an explicit bound."""


def _check_bound(n, max_n=None):
    cap = DEFAULT_MAX_N if max_n is None else max_n
    if n > cap:
        raise ScaleBoundError(
            "ground set of size %d exceeds the configured bound %d "
            "(pass max_n explicitly to raise it)" % (n, cap)
        )
    if n < 1:
        raise PartitionError("ground set must be nonempty")


class SetPartition:
    """A partition of {1..n}, stored as a restricted-growth string."""

    __slots__ = ("n", "rgs")

    def __init__(self, rgs):
        rgs = tuple(rgs)
        if not rgs:
            raise PartitionError("empty ground set")
        if rgs[0] != 0:
            raise PartitionError("restricted-growth string must start with 0")
        top = 0
        for x in rgs[1:]:
            if not 0 <= x <= top + 1:
                raise PartitionError("not a restricted-growth string: %r" % (rgs,))
            top = max(top, x)
        self.n = len(rgs)
        self.rgs = rgs

    @classmethod
    def from_blocks(cls, n, blocks):
        """Build from 1-based blocks, e.g. from_blocks(3, [[1,2],[3]])."""
        seen = {}
        for b, block in enumerate(blocks):
            for e in block:
                if not 1 <= e <= n:
                    raise PartitionError("element %r outside 1..%d" % (e, n))
                if e - 1 in seen:
                    raise PartitionError("element %r appears twice" % (e,))
                seen[e - 1] = b
        if len(seen) != n:
            raise PartitionError("blocks do not cover 1..%d" % n)
        relabel = {}
        rgs = []
        for i in range(n):
            b = seen[i]
            if b not in relabel:
                relabel[b] = len(relabel)
            rgs.append(relabel[b])
        return cls(rgs)

    @classmethod
    def bottom(cls, n):
        return cls(range(n))

    @classmethod
    def top(cls, n):
        return cls([0] * n)

    def blocks(self):
        """Blocks as sorted tuples of 1-based elements, ordered by minimum."""
        out = {}
        for i, b in enumerate(self.rgs):
            out.setdefault(b, []).append(i + 1)
        return tuple(tuple(out[b]) for b in sorted(out))

    def num_blocks(self):
        return max(self.rgs) + 1

    def block_sizes(self):
        """Sizes of the blocks, sorted descending (an integer partition of n)."""
        counts = {}
        for b in self.rgs:
            counts[b] = counts.get(b, 0) + 1
        return tuple(sorted(counts.values(), reverse=True))

    def __eq__(self, other):
        return isinstance(other, SetPartition) and self.rgs == other.rgs

    def __hash__(self):
        return hash(self.rgs)

    def __lt__(self, other):
        # lexicographic on the encoding; a deterministic total order, not refinement
        return self.rgs < other.rgs

    def __repr__(self):
        return "SetPartition(%s)" % "|".join("".join(str(e) for e in blk) for blk in self.blocks())

    def to_json(self):
        return [list(blk) for blk in self.blocks()]

    @classmethod
    def from_json(cls, data):
        elems = [e for blk in data for e in blk]
        return cls.from_blocks(len(elems), data)


def leq(a, b):
    """Refinement order: every block of a lies inside a block of b."""
    if a.n != b.n:
        raise PartitionError("comparing partitions of different ground sets")
    image = {}
    for x, y in zip(a.rgs, b.rgs):
        if x in image:
            if image[x] != y:
                return False
        else:
            image[x] = y
    return True


def join(a, b):
    """Finest common coarsening (union of the two relations)."""
    if a.n != b.n:
        raise PartitionError("joining partitions of different ground sets")
    n = a.n
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri

    for rgs in (a.rgs, b.rgs):
        first = {}
        for i, x in enumerate(rgs):
            if x in first:
                union(first[x], i)
            else:
                first[x] = i
    relabel = {}
    out = []
    for i in range(n):
        r = find(i)
        if r not in relabel:
            relabel[r] = len(relabel)
        out.append(relabel[r])
    return SetPartition(out)


def meet(a, b):
    """Common refinement (pairwise intersections of blocks)."""
    if a.n != b.n:
        raise PartitionError("meeting partitions of different ground sets")
    relabel = {}
    out = []
    for x, y in zip(a.rgs, b.rgs):
        key = (x, y)
        if key not in relabel:
            relabel[key] = len(relabel)
        out.append(relabel[key])
    return SetPartition(out)


def atoms(n):
    """The n(n-1)/2 partitions with one doubleton block, in deterministic order."""
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            blocks = [[i, j]] + [[k] for k in range(1, n + 1) if k != i and k != j]
            out.append(SetPartition.from_blocks(n, blocks))
    out.sort(key=lambda p: p.rgs)
    return out


def enumerate_partitions(n, max_n=None):
    """All of the partition lattice, in lexicographic rgs order."""
    _check_bound(n, max_n)
    out = []

    def rec(prefix, top):
        if len(prefix) == n:
            out.append(SetPartition(prefix))
            return
        for x in range(top + 2):
            rec(prefix + [x], max(top, x))

    rec([0], 0)
    return out


def act(perm, part):
    """Relabel a partition by a permutation given as a 1-based image tuple."""
    n = part.n
    if len(perm) != n or sorted(perm) != list(range(1, n + 1)):
        raise PartitionError("not a permutation of 1..%d: %r" % (n, perm))
    assignment = {}
    for i, b in enumerate(part.rgs):
        assignment[perm[i] - 1] = b
    relabel = {}
    out = []
    for i in range(n):
        b = assignment[i]
        if b not in relabel:
            relabel[b] = len(relabel)
        out.append(relabel[b])
    return SetPartition(out)


def perm_from_cycles(n, cycles):
    """Permutation (1-based image tuple) from disjoint cycles, e.g. [(1,2,3)]."""
    images = list(range(1, n + 1))
    seen = set()
    for cycle in cycles:
        for e in cycle:
            if not 1 <= e <= n or e in seen:
                raise PartitionError("bad cycle %r" % (cycle,))
            seen.add(e)
        for i, e in enumerate(cycle):
            images[e - 1] = cycle[(i + 1) % len(cycle)]
    return tuple(images)


def cycle_type_representative(n, cycle_type):
    """The standard representative with consecutive cycles, e.g. (3,2) -> (1 2 3)(4 5)."""
    if sorted(cycle_type, reverse=True) != list(cycle_type) or sum(cycle_type) != n:
        raise PartitionError("cycle type must be a decreasing partition of %d" % n)
    cycles = []
    start = 1
    for length in cycle_type:
        cycles.append(tuple(range(start, start + length)))
        start += length
    return perm_from_cycles(n, cycles)


def compose(p, q):
    """Composite permutation: first apply q, then p."""
    return tuple(p[q[i] - 1] for i in range(len(p)))


def all_permutations(n):
    return [tuple(p) for p in itertools.permutations(range(1, n + 1))]


class UpSet:
    """Upward-closed subset of the partition lattice, stored by minimal generators."""

    def __init__(self, n, generators):
        self.n = n
        gens = []
        for g in generators:
            if g.n != n:
                raise PartitionError("generator on the wrong ground set")
            if g not in gens:
                gens.append(g)
        # antichain reduction: drop any generator above another
        reduced = [g for g in gens if not any(h != g and leq(h, g) for h in gens)]
        reduced.sort(key=lambda p: p.rgs)
        self.generators = tuple(reduced)

    def __contains__(self, part):
        return any(leq(g, part) for g in self.generators)

    def __eq__(self, other):
        return isinstance(other, UpSet) and self.n == other.n and self.generators == other.generators

    def __hash__(self):
        return hash((self.n, self.generators))

    def __repr__(self):
        return "UpSet(n=%d, generators=%s)" % (self.n, list(self.generators))

    def minimal_elements(self):
        return self.generators

    def members(self, max_n=None):
        """All partitions above some generator, in deterministic order."""
        return [p for p in enumerate_partitions(self.n, max_n) if p in self]

    def is_stable_under(self, perm):
        moved = UpSet(self.n, [act(perm, g) for g in self.generators])
        return moved == self

    def to_json(self):
        return {"n": self.n, "generators": [g.to_json() for g in self.generators]}

    @classmethod
    def from_json(cls, data):
        if "named" in data:
            return named_upset(data["named"], data["n"], data.get("k"))
        n = data["n"]
        return cls(n, [SetPartition.from_blocks(n, blk) for blk in data["generators"]])


def orbit_upset(n, generators):
    """The smallest symmetric-group-stable upset containing the generators."""
    gens = []
    for g in generators:
        for perm in all_permutations(n):
            gens.append(act(perm, g))
    return UpSet(n, gens)


def named_upset(kind, n, k=None):
    """The standard families: 'full' (all nontrivial diagonals) and 'k_equals'."""
    if kind == "full":
        k = 2
    elif kind == "k_equals":
        if k is None:
            raise PartitionError("k_equals requires k")
    else:
        raise PartitionError("unknown upset family %r" % (kind,))
    if not 2 <= k <= n:
        raise PartitionError("need 2 <= k <= n, got k=%d, n=%d" % (k, n))
    gens = []
    for block in itertools.combinations(range(1, n + 1), k):
        blocks = [list(block)] + [[e] for e in range(1, n + 1) if e not in block]
        gens.append(SetPartition.from_blocks(n, blocks))
    return UpSet(n, gens)


class JoinClosure:
    """All joins of nonempty subsets of the minimal elements of an upset."""

    def __init__(self, upset, with_bottom=False):
        self.n = upset.n
        self.with_bottom = with_bottom
        frontier = set(upset.generators)
        closed = set(frontier)
        while frontier:
            new = set()
            for x in frontier:
                for g in upset.generators:
                    j = join(x, g)
                    if j not in closed:
                        new.add(j)
            closed |= new
            frontier = new
        if with_bottom:
            closed.add(SetPartition.bottom(self.n))
        self.elements = tuple(sorted(closed, key=lambda p: p.rgs))
        self._index = frozenset(self.elements)

    def __contains__(self, part):
        return part in self._index

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def join_closure(upset, with_bottom=False):
    return JoinClosure(upset, with_bottom)


def lower_interval(elements, top):
    """The sub-poset {x in elements : x <= top}, as a deterministic list."""
    elements = list(elements)
    if top not in elements:
        raise PartitionError("interval top %r is not in the given set" % (top,))
    out = [x for x in elements if leq(x, top)]
    out.sort(key=lambda p: p.rgs)
    return out


def bell_number(n):
    """Number of set partitions (Bell numbers via the triangle recurrence)."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]
