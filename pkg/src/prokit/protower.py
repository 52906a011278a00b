"""Finite windows of towers of finite-dimensional vector spaces.

A ``LinearTower`` has stages X_1, ..., X_N (1-based) of dimensions n_d and
bonding matrices B_d : X_{d+1} -> X_d of shape n_d x n_{d+1}.  The composite
X_e -> X_d for e >= d is B_d B_{d+1} ... B_{e-1}.

Verdicts never extrapolate past the window: when an image chain is still
shrinking at the last stage the answer is ``Undetermined``.
"""

from dataclasses import dataclass, field as dc_field

from .algebra.linalg import Subspace, convert, identity, kron, nullspace, zeros

HOLDS = "Holds"
FAILS = "Fails"
UNDETERMINED = "Undetermined"
STABILIZED = "Stabilized"
ZERO = "Zero"
NONZERO_WITNESS = "NonzeroWitness"


def _mul(F, a, b, n, k, m):
    """(n x k) times (k x m), tolerant of empty dimensions."""
    out = zeros(F, n, m)
    for i in range(n):
        row = a[i]
        res = out[i]
        for t in range(k):
            c = row[t]
            if c == F.zero:
                continue
            bt = b[t]
            for j in range(m):
                if bt[j] != F.zero:
                    res[j] = F.add(res[j], F.mul(c, bt[j]))
    return out


def _cols(matrix, nrows, ncols):
    return [[matrix[i][j] for i in range(nrows)] for j in range(ncols)]


def _from_cols(F, cols, nrows):
    m = zeros(F, nrows, len(cols))
    for j, c in enumerate(cols):
        for i in range(nrows):
            m[i][j] = c[i]
    return m


def _image(F, matrix, nrows, ncols):
    return Subspace(F, nrows, _cols(matrix, nrows, ncols))


def _restrict(F, matrix, src, tgt, nrows):
    """Matrix of ``matrix`` restricted to src -> tgt in their RREF bases."""
    cols = []
    for b in src.basis:
        v = [F.zero] * nrows
        for i in range(nrows):
            s = F.zero
            for x, y in zip(matrix[i], b):
                if x != F.zero and y != F.zero:
                    s = F.add(s, F.mul(x, y))
            v[i] = s
        cols.append(tgt.coordinates(v))
    return _from_cols(F, cols, tgt.dim)


class LinearTower:
    def __init__(self, field, dims, bondings):
        dims = [int(n) for n in dims]
        if not dims or any(n < 0 for n in dims):
            raise ValueError("need at least one stage of nonnegative dimension")
        if len(bondings) != len(dims) - 1:
            raise ValueError(f"{len(dims)} stages need {len(dims) - 1} bonding matrices")
        mats = []
        for d, B in enumerate(bondings, start=1):
            B = convert(field, B)
            rows, cols = dims[d - 1], dims[d]
            if len(B) != rows or any(len(r) != cols for r in B):
                raise ValueError(f"bonding {d} must have shape {rows}x{cols}")
            mats.append(B)
        self.field = field
        self.dims = tuple(dims)
        self.bondings = tuple(tuple(tuple(r) for r in B) for B in mats)

    @classmethod
    def constant(cls, field, n, length, matrix=None):
        B = identity(field, n) if matrix is None else matrix
        return cls(field, [n] * length, [B] * (length - 1))

    def __len__(self):
        return len(self.dims)

    def __repr__(self):
        return f"LinearTower({self.field}, dims={list(self.dims)})"

    def __eq__(self, other):
        return (
            isinstance(other, LinearTower)
            and self.field == other.field
            and self.dims == other.dims
            and self.bondings == other.bondings
        )

    def dim(self, d):
        return self.dims[d - 1]

    def bonding(self, d):
        """B_d : X_{d+1} -> X_d."""
        return [list(r) for r in self.bondings[d - 1]]

    def composite(self, e, d):
        """Matrix of X_e -> X_d (e >= d)."""
        if not 1 <= d <= e <= len(self):
            raise IndexError(f"need 1 <= d <= e <= {len(self)}")
        F = self.field
        m = identity(F, self.dims[d - 1])
        for k in range(d, e):
            m = _mul(F, m, self.bonding(k), self.dims[d - 1], self.dims[k - 1], self.dims[k])
        return m


class CommutationError(ValueError):
    def __init__(self, stage):
        super().__init__(f"square at stage {stage} does not commute")
        self.stage = stage


class LevelMorphism:
    """Stage matrices phi_d : src_d -> tgt_d commuting with the bondings."""

    def __init__(self, source, target, maps):
        if len(source) != len(target) or len(maps) != len(source):
            raise ValueError("source, target and maps need equal window length")
        if source.field != target.field:
            raise ValueError("towers over different fields")
        F = source.field
        mats = []
        for d, m in enumerate(maps, start=1):
            m = convert(F, m) if m else [[] for _ in range(target.dim(d))]
            if len(m) != target.dim(d) or any(len(r) != source.dim(d) for r in m):
                raise ValueError(f"map {d} must have shape {target.dim(d)}x{source.dim(d)}")
            mats.append(m)
        for d in range(1, len(source)):
            left = _mul(F, mats[d - 1], source.bonding(d), target.dim(d), source.dim(d), source.dim(d + 1))
            right = _mul(F, target.bonding(d), mats[d], target.dim(d), target.dim(d + 1), source.dim(d + 1))
            if left != right:
                raise CommutationError(d)
        self.source = source
        self.target = target
        self.maps = tuple(tuple(tuple(r) for r in m) for m in mats)

    def map(self, d):
        return [list(r) for r in self.maps[d - 1]]

    @classmethod
    def identity(cls, T):
        return cls(T, T, [identity(T.field, n) for n in T.dims])


@dataclass
class WindowVerdict:
    outcome: str
    stage: int = None
    witness: list = None
    metadata: dict = dc_field(default_factory=dict)

    @property
    def holds(self):
        return self.outcome == HOLDS

    def __str__(self):
        if self.outcome == FAILS:
            return f"Fails(stage {self.stage}, witness {[str(v) for v in self.witness]})"
        return self.outcome


@dataclass
class MLVerdict:
    outcome: str
    stage: int
    at: int = None
    image_dims: tuple = ()

    @property
    def stabilized(self):
        return self.outcome == STABILIZED

    def __str__(self):
        return f"Stabilized({self.at})" if self.stabilized else UNDETERMINED


def image_window(T, d):
    """Images Im(X_e -> X_d) for e = d..N, a descending list of subspaces."""
    F = T.field
    n = T.dim(d)
    out = []
    for e in range(d, len(T) + 1):
        out.append(_image(F, T.composite(e, d), n, T.dim(e)))
    return out


def epi_check(T):
    F = T.field
    for d in range(1, len(T)):
        img = _image(F, T.bonding(d), T.dim(d), T.dim(d + 1))
        if not img.is_full():
            return WindowVerdict(FAILS, d, img.complement_vector(), {"window": len(T)})
    return WindowVerdict(HOLDS, metadata={"window": len(T)})


def ml_check(T, d):
    """Least e* from which the image chain at stage d stays constant.

    Undetermined when the chain is still shrinking at the horizon, i.e. both
    of its last two steps drop.  A single final drop is read as stabilizing
    at the last stage.
    """
    dims = [S.dim for S in image_window(T, d)]
    if len(dims) >= 3 and dims[-3] > dims[-2] > dims[-1]:
        return MLVerdict(UNDETERMINED, d, None, tuple(dims))
    k = len(dims) - 1
    while k > 0 and dims[k - 1] == dims[k]:
        k -= 1
    return MLVerdict(STABILIZED, d, d + k, tuple(dims))


def ml_report(T):
    return [ml_check(T, d) for d in range(1, len(T) + 1)]


def _epi_subspaces(T):
    N = len(T)
    return [_image(T.field, T.composite(N, d), T.dim(d), T.dim(N)) for d in range(1, N + 1)]


def epi_part(T):
    """Stagewise images of the last stage, with the inclusion morphism."""
    F = T.field
    subs = _epi_subspaces(T)
    bond = [_restrict(F, T.bonding(d), subs[d], subs[d - 1], T.dim(d)) for d in range(1, len(T))]
    E = LinearTower(F, [S.dim for S in subs], bond)
    incl = LevelMorphism(E, T, [S.basis_matrix() for S in subs])
    return E, incl


def epi_subspaces(T):
    """The epi part stages as subspaces of the original stages."""
    return _epi_subspaces(T)


@dataclass
class MLWitness:
    stage: int
    source_stage: int
    projection: list


def ml_isomorphism_witness(T):
    """Projections X_{d'} -> X^epi_d inverting the inclusion up to bondings.

    For each stage d, d' is the stabilization index; the projection composed
    with the inclusion equals the composite X_{d'} -> X_d, and precomposed with
    the inclusion at d' it equals the epi-part composite.  Returns ``None``
    when some stage is not stabilized within the window.
    """
    mls = ml_report(T)
    if not all(v.stabilized for v in mls):
        return None
    F = T.field
    E, incl = epi_part(T)
    subs = _epi_subspaces(T)
    out = []
    for d, v in enumerate(mls, start=1):
        dp = v.at
        comp = T.composite(dp, d)
        cols = [subs[d - 1].coordinates(c) for c in _cols(comp, T.dim(d), T.dim(dp))]
        proj = _from_cols(F, cols, subs[d - 1].dim)
        # incl_d . proj == composite(d' -> d)
        back = _mul(F, incl.map(d), proj, T.dim(d), E.dim(d), T.dim(dp))
        if back != comp:
            raise AssertionError(f"projection at stage {d} does not factor the composite")
        # proj . incl_{d'} == epi composite(d' -> d)
        fwd = _mul(F, proj, incl.map(dp), E.dim(d), T.dim(dp), E.dim(dp))
        if fwd != E.composite(dp, d):
            raise AssertionError(f"projection at stage {d} does not restrict to the epi bonding")
        out.append(MLWitness(d, dp, proj))
    return out


def _kernel_subspaces(phi):
    F = phi.source.field
    return [
        Subspace(F, phi.source.dim(d), nullspace(F, phi.map(d), phi.source.dim(d)))
        for d in range(1, len(phi.source) + 1)
    ]


def kernel_inclusion(phi):
    F = phi.source.field
    S = phi.source
    subs = _kernel_subspaces(phi)
    bond = [_restrict(F, S.bonding(d), subs[d], subs[d - 1], S.dim(d)) for d in range(1, len(S))]
    K = LinearTower(F, [k.dim for k in subs], bond)
    return LevelMorphism(K, S, [k.basis_matrix() for k in subs])


def level_kernel(phi):
    return kernel_inclusion(phi).source


def cokernel_projection(phi):
    F = phi.source.field
    T = phi.target
    qs, secs = [], []
    for d in range(1, len(T) + 1):
        img = _image(F, phi.map(d), T.dim(d), phi.source.dim(d))
        q, s = img.quotient_map()
        qs.append(q if q else [])
        secs.append(s)
    cdims = [T.dim(d) - _image(F, phi.map(d), T.dim(d), phi.source.dim(d)).dim for d in range(1, len(T) + 1)]
    bond = []
    for d in range(1, len(T)):
        qb = _mul(F, qs[d - 1], T.bonding(d), cdims[d - 1], T.dim(d), T.dim(d + 1))
        bond.append(_mul(F, qb, secs[d], cdims[d - 1], T.dim(d + 1), cdims[d]))
    C = LinearTower(F, cdims, bond)
    # LevelMorphism checks that the induced bondings commute
    return LevelMorphism(T, C, qs)


def level_cokernel(phi):
    return cokernel_projection(phi).target


@dataclass
class ZeroVerdict:
    outcome: str
    stage: int = None
    witness: list = None

    def __str__(self):
        return self.outcome


def zero_test(T):
    mls = ml_report(T)
    subs = _epi_subspaces(T)
    if all(v.stabilized for v in mls) and all(S.is_zero() for S in subs):
        return ZeroVerdict(ZERO)
    N = len(T)
    for v, S in zip(mls, subs):
        if v.stabilized and v.at < N and not S.is_zero():
            return ZeroVerdict(NONZERO_WITNESS, v.stage, list(S.basis[0]))
    return ZeroVerdict(UNDETERMINED)


class NotEpiError(ValueError):
    pass


def epi_morphism_check(phi):
    """Stagewise surjectivity of a morphism into an epi tower."""
    if not epi_check(phi.target).holds:
        raise NotEpiError("target tower is not epi within the window")
    F = phi.source.field
    for d in range(1, len(phi.source) + 1):
        img = _image(F, phi.map(d), phi.target.dim(d), phi.source.dim(d))
        if not img.is_full():
            return WindowVerdict(FAILS, d, img.complement_vector(), {"window": len(phi.source)})
    return WindowVerdict(HOLDS, metadata={"window": len(phi.source)})


def tensor_linear(S, T):
    if S.field != T.field or len(S) != len(T):
        raise ValueError("tensor needs the same field and window length")
    F = S.field
    dims = [a * b for a, b in zip(S.dims, T.dims)]
    bond = [
        kron(F, S.bonding(d), T.bonding(d), (S.dim(d), S.dim(d + 1)), (T.dim(d), T.dim(d + 1)))
        for d in range(1, len(S))
    ]
    return LinearTower(F, dims, bond)


def tensor_morphism(phi, T):
    """phi ⊗ id_T."""
    F = T.field
    S = tensor_linear(phi.source, T)
    U = tensor_linear(phi.target, T)
    maps = [
        kron(F, phi.map(d), identity(F, T.dim(d)), (phi.target.dim(d), phi.source.dim(d)), (T.dim(d), T.dim(d)))
        for d in range(1, len(T) + 1)
    ]
    return LevelMorphism(S, U, maps)


@dataclass
class StageReport:
    stage: int
    dim: int
    image_dim: int

    @property
    def surjective(self):
        return self.image_dim == self.dim


@dataclass
class MildnessReport:
    stages: list
    limit_dim: int
    metadata: dict

    @property
    def all_surjective(self):
        return all(s.surjective for s in self.stages)


def mildness_evidence(T):
    """Surjectivity of the projections from the window limit to each stage.

    The limit is the space of compatible tuples (v_1, ..., v_N) with
    v_d = B_d v_{d+1}.
    """
    F = T.field
    N = len(T)
    offs = [0]
    for n in T.dims:
        offs.append(offs[-1] + n)
    total = offs[-1]
    eqs = []
    for d in range(1, N):
        B = T.bonding(d)
        for i in range(T.dim(d)):
            row = [F.zero] * total
            row[offs[d - 1] + i] = F.one
            for j in range(T.dim(d + 1)):
                if B[i][j] != F.zero:
                    row[offs[d] + j] = F.neg(B[i][j])
            eqs.append(row)
    tuples = nullspace(F, eqs, total)
    stages = []
    for d in range(1, N + 1):
        proj = [v[offs[d - 1] : offs[d]] for v in tuples]
        stages.append(StageReport(d, T.dim(d), Subspace(F, T.dim(d), proj).dim))
    meta = {
        "window": N,
        "note": "finite-window limit; surjectivity here coincides with epi-within-window "
        "and is evidence, not proof, of mildness",
    }
    return MildnessReport(stages, len(tuples), meta)
