"""Truncated Fock-basis oracle for the covariance pipeline.

Everything in the main engine reduces to 2x2 covariance algebra, so this
module recomputes the same observables by brute force in a truncated
number basis: amplitudes on a product of per-mode ladders, passive
unitaries applied sector by sector (a beam splitter conserves the total
excitation of its mode pair, so it block-diagonalises over pair totals,
and each block exponentiates a small tridiagonal generator), and loss
realised as a beam splitter onto a vacuum ancilla that is never traced
out explicitly.  None of the covariance shortcuts are reused, which makes
the comparison meaningful.

Truncation bookkeeping is explicit: a squeezed pair state keeps its exact
geometric tail mass as `norm_deficit`, cutoffs below the per-term bound of
1e-14 are refused, and the measurement routine checks that no appreciable
amplitude has climbed within two levels of any measured mode's ceiling
(the product observable reaches one level past twice the pair cutoff,
hence the two-level pad in the pipeline dimensions).

Per-mode dimensions are heterogeneous on purpose: the two signal modes
need 2 n_sup + 3 levels to hold the post-splitter bunching plus operator
reach, while loss ancillas at small loss angles are occupied essentially
only in their lowest levels, so giving every mode the signal dimension
would square the memory for nothing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gaussian import BsSpec
from .interferometer import InterferometerConfig, evaluate
from .moments import SignalStats

__all__ = [
    "CutoffError",
    "FockState",
    "tail_cutoff",
    "tmsv_fock",
    "apply_unitary_fock",
    "fock_moments",
    "photon_number_expectation",
    "oracle_pipeline",
    "equivalence_grid",
    "GridCase",
    "GridReport",
]

_DEFICIT_CAP = 1e-12
_TAIL_TOL = 1e-14
_ANCILLA_DIM = 16
_MAX_ELEMENTS = 40_000_000  # ~640 MB of complex128; refuse beyond this


class CutoffError(ValueError):
    """A Fock cutoff too small for the requested accuracy."""


@dataclass(frozen=True)
class FockState:
    """Pure state as a complex amplitude tensor over per-mode ladders.

    amplitudes[n1, n2, ...] is the coefficient of |n1, n2, ...>; the shape
    gives each mode's dimension.  norm_deficit records probability mass
    that the truncation provably discarded at construction time; it must
    stay below 1e-12 for the state to be meaningful at the oracle's
    accuracy target.
    """

    amplitudes: np.ndarray
    norm_deficit: float = 0.0

    def __post_init__(self):
        if not np.iscomplexobj(self.amplitudes):
            object.__setattr__(self, "amplitudes",
                               np.asarray(self.amplitudes, dtype=complex))
        if not 0.0 <= self.norm_deficit <= _DEFICIT_CAP:
            raise ValueError(
                f"norm deficit {self.norm_deficit} outside [0, {_DEFICIT_CAP}]")

    @property
    def n_modes(self) -> int:
        return self.amplitudes.ndim

    @property
    def dims(self) -> tuple:
        return self.amplitudes.shape

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))


def tail_cutoff(G: float, tol: float = _TAIL_TOL) -> int:
    """Smallest pair cutoff whose first omitted |n, n> weight is <= tol.

    The squeezed pair state has weights tanh^{2n} G / cosh^2 G, so the first
    omitted term at cutoff n_max is tanh^{2(n_max+1)} G / cosh^2 G.
    """
    if G < 0:
        raise ValueError("gain G must be non-negative")
    t2 = np.tanh(G) ** 2
    if t2 == 0.0:
        return 0
    c2 = np.cosh(G) ** 2
    n = 0
    while t2 ** (n + 1) / c2 > tol:
        n += 1
    return n


def tmsv_fock(G: float, xi: float = 0.0, n_max: int | None = None) -> FockState:
    """Squeezed pair state sum_n c_n |n, n> with c_n = (-i e^{i xi} tanh G)^n / cosh G.

    Args:
        G: squeezer gain.
        xi: pump phase.
        n_max: pair cutoff.  Defaults to max(40, tail_cutoff(G)), which keeps
            the legacy floor of 40 while never under-resolving the tail.
            An explicit cutoff below tail_cutoff(G) raises CutoffError.

    The exact discarded mass tanh^{2(n_max+1)} G is stored as norm_deficit.
    """
    needed = tail_cutoff(G)
    if n_max is None:
        n_max = max(40, needed)
    if n_max < needed:
        raise CutoffError(
            f"cutoff too small: n_max={n_max} leaves a tail term above {_TAIL_TOL:g} "
            f"at G={G:g} (need n_max >= {needed})")
    deficit = float(np.tanh(G) ** (2 * (n_max + 1)))
    if deficit > _DEFICIT_CAP:
        raise CutoffError(
            f"cutoff too small: n_max={n_max} discards {deficit:.3e} probability at G={G:g}")
    n = np.arange(n_max + 1)
    coeff = (-1j * np.exp(1j * xi) * np.tanh(G)) ** n / np.cosh(G)
    amps = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    amps[n, n] = coeff
    return FockState(amps, deficit)


def _hermitian_generator(u: np.ndarray) -> np.ndarray:
    """h with u = exp(-i h), from the eigendecomposition of the unitary."""
    lam, w = np.linalg.eig(u)
    h = w @ np.diag(1j * np.log(lam)) @ np.conj(w.T)
    return 0.5 * (h + np.conj(h.T))


# Sector unitaries keyed by (u bytes, di, dj); each entry is a list of
# (k indices, complement indices, block) per conserved pair total.
_SECTOR_CACHE: dict = {}


def _sector_blocks(u: np.ndarray, di: int, dj: int):
    key = (u.tobytes(), di, dj)
    hit = _SECTOR_CACHE.get(key)
    if hit is not None:
        return hit
    if len(_SECTOR_CACHE) > 64:
        _SECTOR_CACHE.clear()
    h = _hermitian_generator(u)
    blocks = []
    for n in range(di + dj - 1):
        k_lo, k_hi = max(0, n - (dj - 1)), min(n, di - 1)
        ks = np.arange(k_lo, k_hi + 1)
        size = len(ks)
        diag = h[0, 0].real * ks + h[1, 1].real * (n - ks)
        ham = np.diag(diag.astype(complex))
        if size > 1:
            kk = ks[:-1]  # hopping k -> k+1 via a_i^dag a_j
            off = h[0, 1] * np.sqrt((kk + 1.0) * (n - kk))
            ham[np.arange(1, size), np.arange(size - 1)] = off
            ham[np.arange(size - 1), np.arange(1, size)] = np.conj(off)
        lam, vec = np.linalg.eigh(ham)
        blocks.append((ks, n - ks, (vec * np.exp(-1j * lam)) @ np.conj(vec.T)))
    _SECTOR_CACHE[key] = blocks
    return blocks


def _apply_pair(amps: np.ndarray, mode_i: int, mode_j: int, u: np.ndarray) -> np.ndarray:
    """Pair unitary on two modes of the amplitude tensor, sector by sector."""
    dims = amps.shape
    di, dj = dims[mode_i], dims[mode_j]
    perm = [k for k in range(len(dims)) if k not in (mode_i, mode_j)] + [mode_i, mode_j]
    st = np.transpose(amps, perm).reshape(-1, di, dj)
    out = np.zeros_like(st)
    for ks, cs, block in _sector_blocks(u, di, dj):
        out[:, ks, cs] = st[:, ks, cs] @ block.T
    inv = np.argsort(perm)
    return np.transpose(out.reshape([dims[k] for k in perm]), inv)


def _apply_phase(amps: np.ndarray, mode: int, phi: float) -> np.ndarray:
    shape = [1] * amps.ndim
    shape[mode] = amps.shape[mode]
    return amps * np.exp(1j * phi * np.arange(amps.shape[mode])).reshape(shape)


def apply_unitary_fock(state: FockState, op, modes) -> FockState:
    """Apply a passive (photon-number-conserving) unitary to a FockState.

    Args:
        state: input state.
        op: a BsSpec (two-mode), a float phase angle (one mode, a -> e^{i phi} a),
            or an explicit complex 2x2 mode map, which must be unitary --
            active Bogoliubov maps have no 2x2 unitary form and are rejected.
        modes: the target mode indices, one for a phase, two (distinct) for
            a pair map.
    """
    modes = (modes,) if isinstance(modes, int) else tuple(modes)
    if any(not 0 <= m < state.n_modes for m in modes):
        raise ValueError(f"modes {modes} out of range for {state.n_modes} modes")
    if isinstance(op, BsSpec):
        op = op.unitary()
    if isinstance(op, (int, float)):
        if len(modes) != 1:
            raise ValueError("a phase acts on exactly one mode")
        return FockState(_apply_phase(state.amplitudes, modes[0], float(op)),
                         state.norm_deficit)
    u = np.asarray(op, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError("pair operations must be 2x2 mode maps")
    if np.linalg.norm(np.conj(u.T) @ u - np.eye(2)) > 1e-12:
        raise ValueError("mode map is not unitary; only passive operations are supported")
    if len(modes) != 2 or modes[0] == modes[1]:
        raise ValueError("a pair map acts on two distinct modes")
    return FockState(_apply_pair(state.amplitudes, modes[0], modes[1], u),
                     state.norm_deficit)


def _x_apply(amps: np.ndarray, mode: int) -> np.ndarray:
    """(a + a^dag) along one axis; the result reaches one level further up."""
    st = np.moveaxis(amps, mode, -1)
    out = np.zeros_like(st)
    root = np.sqrt(np.arange(1, amps.shape[mode]))
    out[..., :-1] += st[..., 1:] * root
    out[..., 1:] += st[..., :-1] * root
    return np.moveaxis(out, -1, mode)


def _level_occupancy(amps: np.ndarray, mode: int) -> np.ndarray:
    """Marginal probability of each ladder level of one mode."""
    st = np.moveaxis(amps, mode, -1)
    return np.sum(np.abs(st) ** 2, axis=tuple(range(st.ndim - 1)))


def photon_number_expectation(state: FockState, modes=None) -> float:
    """Mean photon number summed over the given modes (all by default)."""
    if modes is None:
        modes = range(state.n_modes)
    total = 0.0
    for m in modes:
        occ = _level_occupancy(state.amplitudes, m)
        total += float(np.sum(occ * np.arange(len(occ))))
    return total


def fock_moments(state: FockState, mode_a: int, mode_b: int):
    """First and second moments of X_a X_b, with truncation guards.

    Requires the top two ladder levels of each measured mode to carry less
    than 1e-9 probability, so that the one-level climb of each quadrature
    factor cannot push amplitude off the ladder.  The first moment of the
    Hermitian product must come out real; an imaginary residue above 1e-12
    (relative to the signal scale) indicates a broken state and raises.
    """
    amps = state.amplitudes
    for m in (mode_a, mode_b):
        occ = _level_occupancy(amps, m)
        top = float(occ[-2:].sum())
        if top >= 1e-9:
            raise CutoffError(
                f"mode {m} holds {top:.3e} probability in its top two levels; "
                "enlarge the cutoff")
    xx = _x_apply(_x_apply(amps, mode_b), mode_a)
    m1c = np.vdot(amps, xx)
    m2 = float(np.real(np.vdot(xx, xx)))
    if abs(m1c.imag) > 1e-12 * max(1.0, np.sqrt(m2)):
        raise ArithmeticError(
            f"first moment has imaginary residue {m1c.imag:.3e}; state is inconsistent")
    return float(m1c.real), m2


def oracle_pipeline(config: InterferometerConfig, phi: float,
                    n_max: int | None = None,
                    ancilla_dim: int = _ANCILLA_DIM) -> SignalStats:
    """Run the full interferometer in the Fock basis.

    Mirrors the covariance pipeline element by element: squeezed pair in,
    per-mode losses as beam splitters onto fresh vacuum ancillas, splitter,
    phase, arm losses, recombiner, then the product moments on the two
    signal modes (the photon count also covers only those, matching what a
    lossy channel leaves downstream).

    Signal-mode dimension is 2 n_sup + 3: pair totals up to 2 n_sup occur
    after the splitter, and the measurement climbs one more level per mode.
    Loss ancillas get `ancilla_dim` levels, plenty for small loss angles.
    """
    n_sup = tail_cutoff(config.G) if n_max is None else n_max
    losses = [(0, config.alpha1), (1, config.beta1)]
    arm_losses = [(0, config.alpha2), (1, config.beta2)]
    n_anc = sum(1 for _, a in losses + arm_losses if a != 0.0)
    dim = 2 * n_sup + 3
    total = dim * dim * ancilla_dim ** n_anc
    if total > _MAX_ELEMENTS:
        raise ValueError(
            f"state tensor would need {total} amplitudes; reduce gain or losses")

    seed = tmsv_fock(config.G, config.xi, n_max=n_sup)
    amps = np.zeros([dim, dim] + [ancilla_dim] * n_anc, dtype=complex)
    idx = np.arange(n_sup + 1)
    amps[(idx, idx) + (0,) * n_anc] = seed.amplitudes[idx, idx]
    state = FockState(amps, seed.norm_deficit)

    def lose(st, pairs, next_anc):
        for mode, angle in pairs:
            if angle == 0.0:
                continue
            c, s = np.cos(angle), np.sin(angle)
            bs = np.array([[c, s], [-s, c]], dtype=complex)
            st = apply_unitary_fock(st, bs, (mode, next_anc))
            next_anc += 1
        return st, next_anc

    state, anc = lose(state, losses, 2)
    state = apply_unitary_fock(state, BsSpec("B1", config.delta1), (0, 1))
    state = apply_unitary_fock(state, phi, 0)
    state, anc = lose(state, arm_losses, anc)
    state = apply_unitary_fock(state, BsSpec("B2", config.delta2), (0, 1))

    m1, m2 = fock_moments(state, 0, 1)
    var = m2 - m1 * m1
    return SignalStats(
        mean=m1, second_moment=m2, sigma=float(np.sqrt(max(var, 0.0))),
        mean_photons=photon_number_expectation(state, (0, 1)))


@dataclass(frozen=True)
class GridCase:
    G: float
    prep_loss: float
    delta1: float
    phi: float
    delta2: float
    deviation: float


@dataclass(frozen=True)
class GridReport:
    tolerance: float
    n_cases: int
    max_deviation: float
    worst: GridCase | None
    failures: tuple
    cutoff_errors: tuple = ()

    @property
    def passed(self) -> bool:
        if self.cutoff_errors or self.worst is None:
            return False
        return self.max_deviation <= self.tolerance


def equivalence_grid(gains=(0.2, 0.5, 0.8),
                     phases=(0.0, np.pi / 8, np.pi / 4, np.pi / 2, 1.3),
                     imbalances=(-0.1, 0.0, 0.1),
                     prep_losses=(0.0, 0.1),
                     n_max: int | None = None,
                     tolerance: float = 1e-8) -> GridReport:
    """Cross-check the covariance engine against the Fock oracle on a grid.

    Prep loss is applied symmetrically (both signal modes).  The loops are
    ordered so each prepared state is reused across splitter settings, each
    split state across phases, and so on; with the sector-unitary cache this
    keeps the full default grid (270 cases) well under a minute.

    The deviation of a case is the largest absolute difference over the
    mean, second moment, sigma, and photon count.
    """
    worst = None
    failures = []
    cutoff_errors = []
    count = 0
    for G in gains:
        n_sup = tail_cutoff(G) if n_max is None else n_max
        dim = 2 * n_sup + 3
        for loss in prep_losses:
            try:
                seed = tmsv_fock(G, 0.0, n_max=n_sup)
            except CutoffError as exc:
                cutoff_errors.append((float(G), str(exc)))
                break
            n_anc = 2 if loss != 0.0 else 0
            amps = np.zeros([dim, dim] + [_ANCILLA_DIM] * n_anc, dtype=complex)
            idx = np.arange(n_sup + 1)
            amps[(idx, idx) + (0,) * n_anc] = seed.amplitudes[idx, idx]
            prep = FockState(amps, seed.norm_deficit)
            if loss != 0.0:
                c, s = np.cos(loss), np.sin(loss)
                bs = np.array([[c, s], [-s, c]], dtype=complex)
                prep = apply_unitary_fock(prep, bs, (0, 2))
                prep = apply_unitary_fock(prep, bs, (1, 3))
            for d1 in imbalances:
                split = apply_unitary_fock(prep, BsSpec("B1", d1), (0, 1))
                for phi in phases:
                    shifted = apply_unitary_fock(split, float(phi), 0)
                    for d2 in imbalances:
                        out = apply_unitary_fock(shifted, BsSpec("B2", d2), (0, 1))
                        m1, m2 = fock_moments(out, 0, 1)
                        sig = float(np.sqrt(max(m2 - m1 * m1, 0.0)))
                        n_out = photon_number_expectation(out, (0, 1))
                        cfg = InterferometerConfig(
                            G=G, alpha1=loss, beta1=loss, delta1=d1, delta2=d2)
                        ref = evaluate(cfg, phi)
                        dev = max(abs(m1 - ref.mean),
                                  abs(m2 - ref.second_moment),
                                  abs(sig - ref.sigma),
                                  abs(n_out - ref.mean_photons))
                        case = GridCase(G=G, prep_loss=loss, delta1=d1,
                                        phi=float(phi), delta2=d2, deviation=dev)
                        count += 1
                        if worst is None or dev > worst.deviation:
                            worst = case
                        if dev > tolerance:
                            failures.append(case)
    return GridReport(tolerance=tolerance, n_cases=count,
                      max_deviation=worst.deviation if worst else math.nan,
                      worst=worst, failures=tuple(failures),
                      cutoff_errors=tuple(cutoff_errors))
