"""Ring towers: descending ideal chains I_1 ⊇ I_2 ⊇ ... ⊇ I_N in one ring.

Stage d is A_d = R/I_d and the bondings A_{d+1} -> A_d are the quotient maps,
so every tower here is epi by construction.  Stages are numbered from 1.

The checks return a ``TopologyVerdict``.  Negative outcomes carry a witness
(stage index plus polynomial or ideal) that can be re-verified with plain
ideal operations; positive outcomes are bounded evidence over the window.
"""

from dataclasses import dataclass, field

from .algebra import PolyRing
from .ideals import Ideal, Nilpotent, bounded_nilpotency, quotient_dimension, radical_member

COFINAL = "Cofinal"
STRICT_REFINEMENT = "StrictRefinement"
INCOMPARABLE = "Incomparable"
ADIC_WITHIN_WINDOW = "AdicWithinWindow"
NOT_ADIC = "NotAdic"
ADMISSIBLE_WITHIN = "AdmissibleWithin"
NOT_ADMISSIBLE_WITNESS = "NotAdmissibleWitness"
INCONCLUSIVE = "Inconclusive"

POSITIVE = {COFINAL, ADIC_WITHIN_WINDOW, ADMISSIBLE_WITHIN}


class ChainError(ValueError):
    """Chain is not descending; ``stage`` and ``witness`` locate the failure."""

    def __init__(self, stage, witness):
        super().__init__(f"generator {witness} of stage {stage + 1} is not in stage {stage}")
        self.stage = stage
        self.witness = witness


class DescentError(ValueError):
    def __init__(self, side, stage, generator):
        super().__init__(f"map to {side} does not descend at stage {stage}: image of {generator}")
        self.side = side
        self.stage = stage
        self.witness = generator


@dataclass(frozen=True)
class Witness:
    stage: int
    polynomial: object = None
    ideal: object = None
    chain: str = ""

    def describe(self):
        what = self.ideal.format() if self.ideal is not None else str(self.polynomial)
        where = f"{self.chain} " if self.chain else ""
        return f"{where}stage {self.stage}: {what}"


@dataclass
class TopologyVerdict:
    outcome: str
    witness: Witness = None
    direction: str = None
    bound: int = None
    metadata: dict = field(default_factory=dict)

    @property
    def positive(self):
        return self.outcome in POSITIVE

    def label(self):
        if self.outcome == STRICT_REFINEMENT:
            return f"{self.outcome}({self.direction} finer)"
        if self.outcome == ADMISSIBLE_WITHIN:
            return f"{self.outcome}({self.bound})"
        return self.outcome

    def __str__(self):
        s = self.label()
        if self.witness is not None:
            s += f" [witness {self.witness.describe()}]"
        return s


class RingTower:
    """Validated descending chain of ideals in a single polynomial ring."""

    def __init__(self, ring, chain, label=None, check=True):
        if not isinstance(ring, PolyRing):
            raise TypeError("ambient must be a PolyRing")
        chain = [c if isinstance(c, Ideal) else Ideal(ring, c) for c in chain]
        if not chain:
            raise ValueError("a tower needs at least one stage")
        for I in chain:
            if I.ring != ring:
                raise ValueError("all stage ideals must live in the ambient ring")
        if check:
            for d in range(len(chain) - 1):
                bad = chain[d].first_non_member(chain[d + 1])
                if bad is not None:
                    raise ChainError(d + 1, bad)
        self.ring = ring
        self.chain = tuple(chain)
        self.label = label

    @classmethod
    def trivial(cls, n, field=None):
        """n-stage tower of the ground field (no variables, zero ideals)."""
        from .algebra import QQ

        ring = PolyRing((), field or QQ)
        return cls(ring, [Ideal(ring)] * n, label="k")

    def __len__(self):
        return len(self.chain)

    def __iter__(self):
        return iter(self.chain)

    def stage(self, d):
        """Stage ideal I_d (1-based)."""
        if not 1 <= d <= len(self.chain):
            raise IndexError(f"stage {d} outside window 1..{len(self.chain)}")
        return self.chain[d - 1]

    def stage_dimension(self, d):
        """dim_k R/I_d, or None when infinite."""
        return quotient_dimension(self.stage(d))

    def __repr__(self):
        name = f"{self.label}: " if self.label else ""
        return f"RingTower({name}{' ⊇ '.join(I.format() for I in self.chain)})"


def tower_new(ambient, chain, label=None):
    return RingTower(ambient, chain, label)


def _ideals(chain):
    if isinstance(chain, RingTower):
        return list(chain.chain)
    return [c for c in chain]


def _window_meta(**extra):
    meta = {"window_relative": True, "pro_noetherian": "automatic"}
    meta.update(extra)
    return meta


def check_admissible(T, kmax):
    """Each generator of I_d must be nilpotent modulo I_{d+1} within ``kmax``.

    A generator outside the radical of I_{d+1} is a definite failure.  A
    generator in the radical whose nilpotency index exceeds ``kmax`` only
    makes the verdict inconclusive.
    """
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    worst = 0
    undecided = None
    for d in range(len(T.chain) - 1):
        nxt = T.chain[d + 1]
        for g in T.chain[d].gens:
            res = bounded_nilpotency(g, nxt, kmax)
            if isinstance(res, Nilpotent):
                worst = max(worst, res.exponent)
                continue
            if not radical_member(g, nxt):
                return TopologyVerdict(
                    NOT_ADMISSIBLE_WITNESS,
                    Witness(d + 1, polynomial=g),
                    bound=kmax,
                    metadata=_window_meta(window=len(T), kmax=kmax, radical_member=False),
                )
            if undecided is None:
                undecided = Witness(d + 1, polynomial=g)
    meta = _window_meta(window=len(T), kmax=kmax, max_exponent=worst)
    if undecided is not None:
        meta["reason"] = "nilpotent but not within kmax"
        return TopologyVerdict(INCONCLUSIVE, undecided, bound=kmax, metadata=meta)
    return TopologyVerdict(ADMISSIBLE_WITHIN, bound=kmax, metadata=meta)


def check_cofinal(chainA, chainB, names=("first", "second")):
    """Compare the linear topologies spanned by two ideal chains.

    Windows are finite, so when every A-ideal contains some B-ideal only the
    B-ideals up to the deepest one actually needed are tested the other way
    (and symmetrically).  Deeper ideals lie beyond the reach of the other
    window and say nothing.
    """
    A, B = _ideals(chainA), _ideals(chainB)
    if A and B and A[0].ring != B[0].ring:
        raise ValueError("chains live in different rings")
    # need_a[i]: first j with A_i ⊇ B_j
    need_a = [next((j for j, J in enumerate(B) if I.contains(J)), None) for I in A]
    need_b = [next((i for i, I in enumerate(A) if J.contains(I)), None) for J in B]
    meta = _window_meta(windows=(len(A), len(B)))
    a_open = all(v is not None for v in need_a)
    b_open = all(v is not None for v in need_b)
    if a_open and b_open:
        return TopologyVerdict(COFINAL, metadata=meta)
    if a_open:
        reach = max(need_a) + 1 if need_a else 0
        meta["reach"] = (len(A), reach)
        bad = next((j for j in range(reach) if need_b[j] is None), None)
        if bad is None:
            return TopologyVerdict(COFINAL, metadata=meta)
        w = Witness(bad + 1, ideal=B[bad], chain=names[1])
        return TopologyVerdict(STRICT_REFINEMENT, w, direction=names[1], metadata=meta)
    if b_open:
        reach = max(need_b) + 1 if need_b else 0
        meta["reach"] = (reach, len(B))
        bad = next((i for i in range(reach) if need_a[i] is None), None)
        if bad is None:
            return TopologyVerdict(COFINAL, metadata=meta)
        w = Witness(bad + 1, ideal=A[bad], chain=names[0])
        return TopologyVerdict(STRICT_REFINEMENT, w, direction=names[0], metadata=meta)
    bad_a = need_a.index(None)
    bad_b = need_b.index(None)
    meta["other_witness"] = Witness(bad_b + 1, ideal=B[bad_b], chain=names[1])
    return TopologyVerdict(INCOMPARABLE, Witness(bad_a + 1, ideal=A[bad_a], chain=names[0]), metadata=meta)


def adic_powers(J, n):
    """The chain J, J^2, ..., J^n."""
    out = [J]
    for _ in range(n - 1):
        out.append(Ideal(J.ring, (out[-1] * J).basis()))
    return out


def check_adic(T, J, kmax):
    """Is J an ideal of definition whose powers give the chain's topology?"""
    if not isinstance(J, Ideal):
        J = Ideal(T.ring, J)
    N = len(T)
    meta = _window_meta(window=N, kmax=kmax)
    opened = next((d for d, I in enumerate(T.chain) if J.contains(I)), None)
    meta["open_at"] = None if opened is None else opened + 1
    if opened is None:
        meta["reason"] = "no stage ideal lies in J"
        return TopologyVerdict(INCONCLUSIVE, metadata=meta)
    for g in J.gens:
        for d, I in enumerate(T.chain):
            if not isinstance(bounded_nilpotency(g, I, kmax), Nilpotent):
                meta["reason"] = "generator not nilpotent within kmax"
                return TopologyVerdict(INCONCLUSIVE, Witness(d + 1, polynomial=g), bound=kmax, metadata=meta)
    powers = adic_powers(J, N)
    cof = check_cofinal(powers, T, names=("powers", "chain"))
    meta["cofinality"] = cof.label()
    if cof.outcome == COFINAL:
        return TopologyVerdict(ADIC_WITHIN_WINDOW, bound=kmax, metadata=meta)
    return TopologyVerdict(NOT_ADIC, cof.witness, bound=kmax, metadata=meta)


def tower_quotient(T, J):
    """Chain (I_d + J)."""
    if not isinstance(J, Ideal):
        J = Ideal(T.ring, J)
    chain = [I + J for I in T.chain]
    return RingTower(T.ring, chain, label=f"{T.label or 'T'}/{J.format()}", check=False)


def tower_localize(T, f, var=None):
    """Adjoin u with u*f = 1 at every stage."""
    f = T.ring(f)
    if f.is_zero():
        raise ValueError("cannot invert zero")
    var = var or T.ring.fresh_name("u")
    ring = T.ring.extend([var])
    u = ring.gen(var)
    rel = u * f.to_ring(ring) - 1
    chain = [Ideal(ring, [g.to_ring(ring) for g in I.gens] + [rel]) for I in T.chain]
    return RingTower(ring, chain, label=f"{T.label or 'T'}[1/{f}]", check=False)


def tower_tensor(B, C, base, mapB, mapC):
    """Fiber sum B ⊗_base C, stage by stage.

    ``mapB``/``mapC`` send base variable names to polynomials (or strings) in
    the ambient rings of B and C.
    """
    if not (len(B) == len(C) == len(base)):
        raise ValueError("towers must share the window length")
    clash = set(B.ring.names) & set(C.ring.names)
    if clash:
        raise ValueError(f"variable names must be disjoint, shared: {sorted(clash)}")
    if B.ring.field != C.ring.field:
        raise ValueError("towers over different fields")
    mB = {v: B.ring(mapB[v]) for v in base.ring.names}
    mC = {v: C.ring(mapC[v]) for v in base.ring.names}
    ring = PolyRing(B.ring.names + C.ring.names, B.ring.field)
    links = [(mB[v].to_ring(ring) - mC[v].to_ring(ring)) for v in base.ring.names]
    chain = []
    for d in range(len(base)):
        imgs = []
        for s in base.chain[d].gens:
            sb, sc = s.substitute(mB, B.ring), s.substitute(mC, C.ring)
            if sb not in B.chain[d]:
                raise DescentError("first", d + 1, s)
            if sc not in C.chain[d]:
                raise DescentError("second", d + 1, s)
            imgs.append(sb.to_ring(ring))
        gens = [g.to_ring(ring) for g in B.chain[d].gens]
        gens += [g.to_ring(ring) for g in C.chain[d].gens]
        chain.append(Ideal(ring, gens + links + imgs))
    return RingTower(ring, chain, label=f"{B.label or 'B'}⊗{C.label or 'C'}", check=False)
