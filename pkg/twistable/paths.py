"""
Reduced paths in the dual graph of an ideal triangulation.

A crossing is the side index ``3 * t + k`` through which a path leaves
triangle ``t``. A closed curve in normal position is a cyclic sequence of
crossings with no backtracking; an arc additionally carries the corners it
starts and ends at. Intersection points, twists, neighbourhood boundaries and
surgeries are all computed on these sequences.
"""

import logging
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

Step = Tuple[int, Optional[int], Optional[int]]


def is_left(side_in: int, side_out: int) -> bool:
    """A step turns left when the corner it cuts off lies on its left."""
    return side_out == (side_in + 2) % 3


@dataclass(frozen=True)
class Strand:
    """
    Attributes
    ----------
    crossings: Tuple[int, ...]
        sides crossed, in order.
    cyclic: bool
        closed curve when true, arc otherwise.
    start: int
        corner an arc leaves from (``-1`` for closed curves).
    end: int
        corner an arc arrives at (``-1`` for closed curves).
    """

    crossings: Tuple[int, ...]
    cyclic: bool = True
    start: int = -1
    end: int = -1

    def __len__(self):
        return len(self.crossings)

    @property
    def step_count(self) -> int:
        return len(self.crossings) if self.cyclic else len(self.crossings) + 1

    def steps(self, gluing: Sequence[int]) -> List[Step]:
        xs = self.crossings

        if self.cyclic:
            result = []
            for s, x in enumerate(xs):
                entered = gluing[xs[s - 1]]
                result.append((x // 3, entered % 3, x % 3))
            return result

        result = [(self.start // 3, None, xs[0] % 3 if xs else None)]

        for s in range(1, len(xs)):
            entered = gluing[xs[s - 1]]
            result.append((xs[s] // 3, entered % 3, xs[s] % 3))

        if xs:
            entered = gluing[xs[-1]]
            result.append((entered // 3, entered % 3, None))

        return result

    def reversed(self, gluing: Sequence[int]) -> "Strand":
        xs = tuple(gluing[x] for x in reversed(self.crossings))
        return Strand(xs, self.cyclic, self.end, self.start)


def reduce_cycle(crossings: Iterable[int], gluing: Sequence[int]) -> Tuple[int, ...]:
    stack: List[int] = []

    for x in crossings:
        if stack and gluing[stack[-1]] == x:
            stack.pop()
        else:
            stack.append(x)

    i, j = 0, len(stack) - 1
    while i < j and gluing[stack[j]] == stack[i]:
        i += 1
        j -= 1

    return tuple(stack[i : j + 1])


def _rotate_corner(corner: int, side: int, gluing: Sequence[int]) -> Optional[int]:
    """Corner reached by sliding an end across a side incident to it."""
    k = corner % 3
    local = side % 3
    other = gluing[side]

    if local == k:
        return 3 * (other // 3) + (other % 3 + 1) % 3

    if local == (k + 2) % 3:
        return other

    return None


def reduce_arc(
    start: int, crossings: Iterable[int], end: int, gluing: Sequence[int]
) -> Optional[Strand]:
    """Normal form of an arc; ``None`` when the arc is inessential."""
    stack: List[int] = []

    for x in crossings:
        if stack and gluing[stack[-1]] == x:
            stack.pop()
        else:
            stack.append(x)

    changed = True
    while changed and stack:
        changed = False

        moved = _rotate_corner(start, stack[0], gluing)
        if moved is not None:
            start = moved
            stack.pop(0)
            changed = True
            continue

        last = gluing[stack[-1]]
        moved = _rotate_corner(end, last, gluing)
        if moved is not None:
            end = moved
            stack.pop()
            changed = True

    if not stack:
        if start == end:
            return None
        assert start // 3 == end // 3

    return Strand(tuple(stack), False, start, end)


def canonical_cycle(crossings: Tuple[int, ...], gluing: Sequence[int]) -> Tuple[int, ...]:
    if not crossings:
        return crossings

    backwards = tuple(gluing[x] for x in reversed(crossings))
    best = crossings

    for candidate in (crossings, backwards):
        for r in range(len(candidate)):
            rotated = candidate[r:] + candidate[:r]
            if rotated < best:
                best = rotated

    return best


def is_primitive(crossings: Tuple[int, ...]) -> bool:
    m = len(crossings)
    for period in range(1, m):
        if m % period == 0 and crossings == crossings[period:] + crossings[:period]:
            return False
    return True


def is_peripheral(strand: Strand, gluing: Sequence[int]) -> bool:
    """A reduced closed path turning the same way at every step circles one puncture."""
    turns = {is_left(s_in, s_out) for _, s_in, s_out in strand.steps(gluing)}
    return len(turns) == 1


def around_vertex(corner: int, gluing: Sequence[int], clockwise: bool) -> Tuple[int, ...]:
    """Crossings of one full turn around the puncture at ``corner``."""
    path = []
    current = corner

    while True:
        t, k = divmod(current, 3)
        side = 3 * t + (k if clockwise else (k + 2) % 3)
        path.append(side)
        current = _rotate_corner(current, side, gluing)
        if current == corner:
            return tuple(path)


def turn(corner: int, target: int, gluing: Sequence[int], clockwise: bool) -> Tuple[int, ...]:
    """Crossings of the partial turn from ``corner`` to ``target`` around their common puncture."""
    path = []
    current = corner

    while current != target:
        t, k = divmod(current, 3)
        side = 3 * t + (k if clockwise else (k + 2) % 3)
        path.append(side)
        current = _rotate_corner(current, side, gluing)
        assert current != corner, "corners lie on different punctures"

    return tuple(path)


def weights_of(strands: Iterable[Strand], edge_of: Sequence[int], edges: int) -> Tuple[int, ...]:
    weights = [0] * edges
    for strand in strands:
        for x in strand.crossings:
            weights[edge_of[x]] += 1
    return tuple(weights)


@dataclass(frozen=True)
class Strip:
    """
    Maximal run of steps shared by two strands, read along the first one.

    Attributes
    ----------
    entry: int
        step of the first strand where the run begins (the two diverge before it).
    exit: int
        step of the first strand where the run ends.
    length: int
        number of shared crossings.
    other_entry: int
        entry step on the second strand (possibly reversed).
    reversed: bool
        whether the second strand runs against the first.
    linked: bool
        whether the strands must cross along the run.
    entry_left: bool
        whether the first strand arrives on the left of the second.
    """

    entry: int
    exit: int
    length: int
    other_entry: int
    reversed: bool
    linked: bool
    entry_left: bool

    @property
    def sign(self) -> int:
        """+1 when the first strand crosses the second (forward) from left to right."""
        return 1 if self.entry_left != self.reversed else -1


def _index(strand: Strand, i: int) -> Optional[int]:
    if strand.cyclic:
        return i % strand.step_count
    return i if 0 <= i < strand.step_count else None


def strips(u: Strand, v: Strand, gluing: Sequence[int]) -> List[Strip]:
    """All maximal shared runs of ``u`` with ``v`` and with ``v`` reversed."""
    result = []
    su = u.steps(gluing)

    for reverse in (False, True):
        w = v.reversed(gluing) if reverse else v
        sw = w.steps(gluing)

        table: Dict[Tuple[int, int], List[int]] = {}
        for j, (t, _, out) in enumerate(sw):
            if out is not None:
                table.setdefault((t, out), []).append(j)

        limit = len(su) * len(sw) + 2

        for i, (t, a_in, a_out) in enumerate(su):
            if a_out is None:
                continue

            for j in table.get((t, a_out), ()):
                b_in = sw[j][1]
                if a_in == b_in:
                    continue

                n = 1
                while n < limit:
                    ii, jj = _index(u, i + n), _index(w, j + n)
                    _, ia, oa = su[ii]
                    _, ib, ob = sw[jj]
                    if oa is not None and oa == ob:
                        n += 1
                        continue
                    break
                else:
                    continue

                if a_in is None:
                    entry_left = not is_left(b_in, a_out)
                else:
                    entry_left = is_left(a_in, a_out)

                if oa is None and ob is None:
                    linked = False
                else:
                    exit_left = (not is_left(ib, ob)) if oa is None else is_left(ia, oa)
                    linked = entry_left != exit_left

                result.append(Strip(i, ii, n, j, reverse, linked, entry_left))

    return result


def intersection_count(u: Strand, v: Strand, gluing: Sequence[int]) -> int:
    if u.cyclic and v.cyclic and canonical_cycle(u.crossings, gluing) == canonical_cycle(
        v.crossings, gluing
    ):
        return 0

    return sum(1 for strip in strips(u, v, gluing) if strip.linked)


def self_intersects(u: Strand, gluing: Sequence[int]) -> bool:
    """Whether some pair of distinct runs of ``u`` must cross."""
    for strip in strips(u, u, gluing):
        if strip.linked and (strip.reversed or strip.entry != strip.other_entry):
            return True
    return False


@dataclass(frozen=True)
class Point:
    """
    Transverse crossing of two strands inside one triangle.

    Attributes
    ----------
    strands: Tuple[int, int]
        indices of the two strands.
    steps: Tuple[int, int]
        step of each strand holding the crossing.
    sign: int
        +1 when the first strand crosses the second from left to right.
    """

    strands: Tuple[int, int]
    steps: Tuple[int, int]
    sign: int


class Arrangement:
    """
    Overlay of several strands drawn together on the triangulation.

    Every edge crossing gets a position along its edge; inside a triangle each
    step of a strand is a chord between its two positions, and chords cross
    when their endpoints interleave around the triangle.
    """

    def __init__(self, strands: Sequence[Strand], triangulation):
        self.strands = list(strands)
        self.triangulation = triangulation
        self.gluing = triangulation.gluing

        self._steps = [strand.steps(self.gluing) for strand in self.strands]
        self._position: Dict[Tuple[int, int], int] = {}
        self._count: Dict[int, int] = {}

        self._place_crossings()

        self.points: List[Point] = []
        self.along: List[List[Tuple[int, int]]] = [[] for _ in self.strands]

        self._find_points()

    def _place_crossings(self):
        edge_of = self.triangulation.edge_of
        occurrences: Dict[int, List[Tuple[int, int]]] = {}

        for a, strand in enumerate(self.strands):
            for i, x in enumerate(strand.crossings):
                occurrences.setdefault(edge_of[x], []).append((a, i))

        for edge, items in occurrences.items():
            items.sort(key=cmp_to_key(lambda p, q, e=edge: self._compare(e, p, q)))
            self._count[edge] = len(items)
            for position, item in enumerate(items):
                self._position[item] = position

    def _compare(self, edge: int, p: Tuple[int, int], q: Tuple[int, int]) -> int:
        if p == q:
            return 0
        if q < p:
            return -self._compare(edge, q, p)

        (a, i), (b, j) = p, q
        x = self.strands[a].crossings[i]
        other = self.strands[b]

        if other.crossings[j] == x:
            w, jj = other, j
        else:
            w, jj = other.reversed(self.gluing), len(other) - 1 - j

        u_left = self._left_of(self.strands[a], self._steps[a], i, w, w.steps(self.gluing), jj)

        canonical = self.triangulation.edges[edge][0]
        greater = u_left if x == canonical else not u_left

        return 1 if greater else -1

    @staticmethod
    def _left_of(u: Strand, su: List[Step], i: int, w: Strand, sw: List[Step], j: int) -> bool:
        """Side of ``u`` relative to ``w`` where both leave a triangle through the same side."""
        limit = len(su) + len(sw) + 1

        for k in range(limit):
            iu, iw = _index(u, i - k), _index(w, j - k)
            if iu is None or iw is None:
                break

            _, in_u, out_u = su[iu]
            _, in_w, out_w = sw[iw]

            if in_u == in_w:
                if in_u is None:
                    break
                continue

            if in_u is None:
                return not is_left(in_w, out_w)
            if in_w is None:
                return is_left(in_u, out_u)
            return is_left(in_u, out_u)

        for k in range(1, limit):
            iu, iw = _index(u, i + k), _index(w, j + k)
            if iu is None or iw is None:
                break

            _, in_u, out_u = su[iu]
            _, in_w, out_w = sw[iw]

            if out_u == out_w:
                if out_u is None:
                    break
                continue

            if out_u is None:
                return not is_left(in_w, out_w)
            return is_left(in_u, out_u)

        return False

    def _side_key(self, side: int, a: int, i: int) -> Tuple[int, int]:
        """Position of crossing ``i`` of strand ``a`` read along ``side`` of its triangle."""
        edge = self.triangulation.edge_of[side]
        position = self._position[(a, i)]

        if self.triangulation.edges[edge][0] != side:
            position = self._count[edge] - 1 - position

        return side % 3, position

    def chord(self, a: int, s: int) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        strand = self.strands[a]
        t, side_in, side_out = self._steps[a][s]
        n = len(strand)

        if side_in is None:
            entry = (strand.start % 3, -1)
        else:
            previous = (s - 1) % n if strand.cyclic else s - 1
            entry = self._side_key(3 * t + side_in, a, previous)

        if side_out is None:
            exit_ = (strand.end % 3, -1)
        else:
            exit_ = self._side_key(3 * t + side_out, a, s)

        return entry, exit_

    def _find_points(self):
        chords: Dict[int, List[Tuple[int, int]]] = {}

        for a, steps in enumerate(self._steps):
            for s, (t, _, _) in enumerate(steps):
                chords.setdefault(t, []).append((a, s))

        ranks: Dict[Tuple[int, int], List[Tuple[Tuple, int]]] = {}

        for t in sorted(chords):
            members = chords[t]

            for x in range(len(members)):
                for y in range(x + 1, len(members)):
                    (a, s), (b, r) = members[x], members[y]
                    if a == b:
                        continue

                    p1, p2 = self.chord(a, s)
                    q1, q2 = self.chord(b, r)

                    if {p1, p2} & {q1, q2}:
                        continue
                    if _between(q1, p1, p2) == _between(q2, p1, p2):
                        continue

                    sign = 1 if _between(q1, p1, p2) else -1
                    index = len(self.points)
                    self.points.append(Point((a, b), (s, r), sign))

                    near_a = q1 if sign == 1 else q2
                    near_b = p1 if _between(p1, q1, q2) else p2

                    ranks.setdefault((a, s), []).append((_ccw_from(p1, near_a), index))
                    ranks.setdefault((b, r), []).append((_ccw_from(q1, near_b), index))

        for (a, s), items in ranks.items():
            for _, index in sorted(items):
                self.along[a].append((s, index))

        for a in range(len(self.strands)):
            self.along[a].sort(key=lambda item: item[0])

    def order_on(self, a: int) -> List[int]:
        """Point indices met travelling once along strand ``a``."""
        return [index for _, index in self.along[a]]

    def sign_at(self, index: int, a: int) -> int:
        """+1 when strand ``a`` crosses the other strand from left to right at the point."""
        point = self.points[index]
        return point.sign if point.strands[0] == a else -point.sign

    def other_at(self, index: int, a: int) -> int:
        point = self.points[index]
        return point.strands[1] if point.strands[0] == a else point.strands[0]

    def step_at(self, index: int, a: int) -> int:
        point = self.points[index]
        return point.steps[0] if point.strands[0] == a else point.steps[1]

    def partial(self, a: int, start: int, stop: int, direction: int) -> List[int]:
        """
        Crossings walked along strand ``a`` from the point at position ``start``
        of ``order_on(a)`` to the one at ``stop``, forwards or backwards.
        """
        strand = self.strands[a]
        xs = strand.crossings
        m = len(xs)
        along = self.along[a]
        s_p, s_q = along[start][0], along[stop][0]

        if direction > 0:
            if stop > start:
                indices = list(range(s_p, s_q))
            else:
                indices = list(range(s_p, m)) + list(range(0, s_q))
            return [xs[i] for i in indices]

        if stop < start:
            indices = list(range(s_p - 1, s_q - 1, -1))
        else:
            indices = list(range(s_p - 1, -1, -1)) + list(range(m - 1, s_q - 1, -1))
        return [self.gluing[xs[i]] for i in indices]

    def loop_from(self, a: int, index: int, direction: int) -> List[int]:
        """Full turn along closed strand ``a`` starting and ending at a point."""
        xs = self.strands[a].crossings
        s = self.step_at(index, a)

        if direction > 0:
            return list(xs[s:] + xs[:s])
        return [self.gluing[x] for x in reversed(xs[:s])] + [
            self.gluing[x] for x in reversed(xs[s:])
        ]

    def boundary_walks(self) -> List[Tuple[int, ...]]:
        """Reduced boundary paths of a regular neighbourhood of the union."""
        walks = []
        visited = set()

        for a, strand in enumerate(self.strands):
            if not self.along[a]:
                walks.append(strand.crossings)

        positions = {}
        for a in range(len(self.strands)):
            for position, (_, index) in enumerate(self.along[a]):
                positions[(a, index)] = position

        for a in range(len(self.strands)):
            for start in range(len(self.along[a])):
                for direction in (1, -1):
                    state = (a, start, direction)
                    if state in visited:
                        continue

                    path: List[int] = []
                    while state not in visited:
                        visited.add(state)
                        b, position, d = state
                        count = len(self.along[b])
                        following = (position + d) % count
                        path.extend(self.partial(b, position, following, d))

                        index = self.along[b][following][1]
                        c = self.other_at(index, b)
                        sign = self.sign_at(index, b)
                        state = (c, positions[(c, index)], -sign * d)

                    walks.append(reduce_cycle(path, self.gluing))

        return walks


def _between(x, lo, hi) -> bool:
    """Whether ``x`` lies strictly inside the counter-clockwise arc from ``lo`` to ``hi``."""
    if lo < hi:
        return lo < x < hi
    return x > lo or x < hi


def _ccw_from(origin, key):
    return (0 if key > origin else 1, key)


def twist(
    curve: Strand, core: Strand, power: int, triangulation
) -> Tuple[int, ...]:
    """Image of ``curve`` under ``power`` left-handed twists about ``core``."""
    gluing = triangulation.gluing
    xs = curve.crossings

    for _ in range(abs(power)):
        arrangement = Arrangement([Strand(xs), core], triangulation)
        by_step: Dict[int, List[int]] = {}

        for s, index in arrangement.along[0]:
            by_step.setdefault(s, []).append(index)

        result: List[int] = []
        for s, x in enumerate(xs):
            for index in by_step.get(s, ()):
                sign = arrangement.sign_at(index, 0)
                direction = sign if power > 0 else -sign
                result.extend(arrangement.loop_from(1, index, direction))
            result.append(x)

        xs = canonical_cycle(reduce_cycle(result, gluing), gluing)

    return xs
