"""Probabilistic Pauli channels on density matrices and the measurement-free
recovery: a single orthogonal matrix whose labeled rows are the transposed
error-shifted codewords.

Applying that matrix to a corrupted codeword density matrix produces an exact
tensor product of the original single-qubit state with a diagnostic ancilla
state, so the data qubit is recovered without any projection or syndrome
measurement. Operators acting identically on the code space (degenerate
errors, e.g. the per-block Z flips of the 9-qubit code) are collapsed into
one error class with a single row pair.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .codes import Code, ErrorOperator, get_code, standard_error_set
from .linalg import ORTHONORMAL_TOL, basis_vector, gram_schmidt_extend

# Operators whose shifted codewords differ by less than this act identically
# on the code space and share an error class.
CLASS_MERGE_TOL = 1e-10


class KLViolationError(ValueError):
    """Shifted codewords of two error classes fail orthonormality, so no
    orthogonal recovery matrix exists for this operator set."""

    def __init__(self, message: str, pair: tuple[str, str], inner_product: float):
        super().__init__(message)
        self.pair = pair
        self.inner_product = inner_product


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Real symmetric, trace-1, positive semidefinite matrix."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got {m.shape}")
        if float(np.max(np.abs(m - m.T))) > 1e-12:
            raise ValueError("density matrix is not symmetric")
        if abs(float(np.trace(m)) - 1.0) > 1e-12:
            raise ValueError(f"trace is {np.trace(m)!r}, expected 1")
        if float(np.linalg.eigvalsh(m)[0]) < -1e-10:
            raise ValueError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_state(cls, vec: np.ndarray) -> "DensityMatrix":
        vec = np.asarray(vec, dtype=float)
        return cls(np.outer(vec, vec))


@dataclass(frozen=True, eq=False)
class ErrorChannel:
    """rho -> sum_i p_i W_i rho W_i^T over signed-permutation operators."""

    terms: tuple[tuple[float, ErrorOperator], ...]

    def __post_init__(self) -> None:
        probs = np.array([p for p, _ in self.terms])
        if np.any(probs < 0):
            raise ValueError("channel probabilities must be nonnegative")
        if abs(float(probs.sum()) - 1.0) > 1e-12:
            raise ValueError(f"channel probabilities sum to {probs.sum()!r}, expected 1")
        dims = {op.dim for _, op in self.terms}
        if len(dims) > 1:
            raise ValueError("channel operators have mixed dimensions")

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for p, _ in self.terms])

    @property
    def operators(self) -> tuple[ErrorOperator, ...]:
        return tuple(op for _, op in self.terms)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(op.label for _, op in self.terms)

    @property
    def dim(self) -> int:
        return self.terms[0][1].dim

    @classmethod
    def from_probs(
        cls, ops: Sequence[ErrorOperator], probs: Sequence[float]
    ) -> "ErrorChannel":
        if len(ops) != len(probs):
            raise ValueError(f"{len(probs)} probabilities for {len(ops)} operators")
        return cls(tuple((float(p), op) for p, op in zip(probs, ops)))


def read_channel_file(path: str | Path, code: Code) -> ErrorChannel:
    """Parse a channel spec file: one "label probability" pair per line,
    labels resolved against the code's standard error set. Lines starting
    with '#' and blank lines are ignored. Probabilities must sum to 1
    within 1e-9."""
    by_label = {op.label: op for op in standard_error_set(code)}
    terms: list[tuple[float, ErrorOperator]] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'label probability', got {raw!r}")
        label, prob_text = parts
        if label not in by_label:
            raise ValueError(
                f"{path}:{lineno}: unknown operator {label!r} for code {code.name}"
            )
        if label in seen:
            raise ValueError(f"{path}:{lineno}: duplicate operator {label!r}")
        seen.add(label)
        terms.append((float(prob_text), by_label[label]))
    if not terms:
        raise ValueError(f"{path}: no channel terms found")
    total = sum(p for p, _ in terms)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"{path}: probabilities sum to {total!r}, expected 1")
    # Renormalize the sub-1e-9 slack away so the channel invariant holds exactly.
    return ErrorChannel(tuple((p / total, op) for p, op in terms))


def apply_channel(channel: ErrorChannel, rho: DensityMatrix) -> DensityMatrix:
    """sum_i p_i W_i rho W_i^T."""
    if channel.dim != rho.dim:
        raise ValueError(f"channel dimension {channel.dim} != state dimension {rho.dim}")
    out = np.zeros_like(rho.matrix)
    for p, op in channel.terms:
        if p:
            out += p * op.conjugate(rho.matrix)
    return DensityMatrix(out)


def _group_error_classes(code: Code, ops: Sequence[ErrorOperator]) -> list[list[int]]:
    """Group operator indices by identical action on both logical vectors."""
    shift0 = [op.apply(code.logical0) for op in ops]
    shift1 = [op.apply(code.logical1) for op in ops]
    groups: list[list[int]] = []
    for i in range(len(ops)):
        for grp in groups:
            j = grp[0]
            if (
                float(np.max(np.abs(shift0[i] - shift0[j]))) <= CLASS_MERGE_TOL
                and float(np.max(np.abs(shift1[i] - shift1[j]))) <= CLASS_MERGE_TOL
            ):
                grp.append(i)
                break
        else:
            groups.append([i])
    return groups


def _class_label(members: Sequence[str]) -> str:
    if len(members) == 1:
        return members[0]
    return "{" + ",".join(members) + "}"


def _rep_gram(code: Code, ops: Sequence[ErrorOperator], groups: Sequence[Sequence[int]]):
    """Gram matrix of the class representatives' shifted codewords, stacked as
    all logical-0 shifts then all logical-1 shifts."""
    reps = [grp[0] for grp in groups]
    stacked = np.array(
        [ops[i].apply(code.logical0) for i in reps]
        + [ops[i].apply(code.logical1) for i in reps]
    )
    return stacked @ stacked.T


@dataclass(frozen=True, eq=False)
class KLReport:
    """Orthonormality check of the error-shifted codewords.

    gram_deviation is max |<m|W_i^T W_j|n> - delta_ij delta_mn| over class
    representatives; classes lists every operator-label group with identical
    action on the code space, degenerate_classes only the non-singletons.
    """

    gram_deviation: float
    classes: tuple[tuple[str, ...], ...]
    degenerate_classes: tuple[tuple[str, ...], ...]
    worst_pair: tuple[str, str]

    @property
    def is_nondegenerate(self) -> bool:
        return not self.degenerate_classes and self.gram_deviation <= ORTHONORMAL_TOL


def validate_kl(code: Code, ops: Sequence[ErrorOperator]) -> KLReport:
    """Check the orthonormality condition that makes a recovery matrix exist,
    grouping operators with identical action on the code space first."""
    groups = _group_error_classes(code, ops)
    gram = _rep_gram(code, ops, groups)
    dev = np.abs(gram - np.eye(gram.shape[0]))
    wi, wj = np.unravel_index(int(dev.argmax()), dev.shape)
    k = len(groups)

    def row_name(r: int) -> str:
        m, c = (1, r - k) if r >= k else (0, r)
        return f"{ops[groups[c][0]].label}|{m}>_L"

    classes = tuple(tuple(ops[i].label for i in grp) for grp in groups)
    return KLReport(
        gram_deviation=float(dev.max()),
        classes=classes,
        degenerate_classes=tuple(c for c in classes if len(c) > 1),
        worst_pair=(row_name(int(wi)), row_name(int(wj))),
    )


@dataclass(frozen=True, eq=False)
class RowLabel:
    """Provenance of one recovery-matrix row: logical value and error class
    for labeled rows, m=None for completion rows."""

    m: int | None
    class_index: int | None
    label: str


@dataclass(frozen=True, eq=False)
class RecoveryMatrix:
    """Orthogonal recovery matrix with per-row labels.

    Row m*2^(n-1) + c is (W_c |m>_L)^T for error class c, so applying the
    matrix maps W_c |psi> to psi (x) e_c with the data qubit in the first
    tensor factor. Rows not pinned by an error class are deterministic
    orthonormal completion rows.
    """

    code_name: str
    matrix: np.ndarray = field(repr=False)
    row_labels: tuple[RowLabel, ...]
    classes: tuple[tuple[str, ...], ...]
    class_map: dict[str, int]

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=float)
        dev = float(np.max(np.abs(m @ m.T - np.eye(m.shape[0]))))
        if dev > ORTHONORMAL_TOL:
            raise ValueError(f"recovery matrix is not orthogonal (deviation {dev:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def ancilla_dim(self) -> int:
        return self.dim // 2

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def class_labels(self) -> tuple[str, ...]:
        return tuple(_class_label(c) for c in self.classes)


def build_recovery(code: Code, ops: Sequence[ErrorOperator]) -> RecoveryMatrix:
    """Stack transposed error-shifted codewords into an orthogonal matrix.

    The logical-0 rows of the error classes go in input order at the top,
    the logical-1 rows at offset 2^(n-1); when the classes do not fill both
    halves the remaining rows come from Gram-Schmidt completion over the
    standard basis. Rejects operator sets whose shifted codewords are not
    orthonormal across classes.
    """
    ops = tuple(ops)
    groups = _group_error_classes(code, ops)
    report = validate_kl(code, ops)
    if report.gram_deviation > ORTHONORMAL_TOL:
        a, b = report.worst_pair
        raise KLViolationError(
            f"shifted codewords {a} and {b} are not orthonormal "
            f"(deviation {report.gram_deviation:.3e}); "
            "this operator set is not correctable by a single orthogonal matrix",
            pair=(a, b),
            inner_product=report.gram_deviation,
        )
    d = code.dim
    half = d // 2
    k = len(groups)
    if 2 * k > d:
        raise KLViolationError(
            f"{k} error classes need {2 * k} orthonormal rows in dimension {d}",
            pair=("", ""),
            inner_product=float("nan"),
        )

    rows = np.zeros((d, d))
    labels: list[RowLabel] = [RowLabel(None, None, "(completion)") for _ in range(d)]
    for c, grp in enumerate(groups):
        rep = ops[grp[0]]
        cls_label = _class_label([ops[i].label for i in grp])
        rows[c] = rep.apply(code.logical0)
        rows[half + c] = rep.apply(code.logical1)
        labels[c] = RowLabel(0, c, cls_label)
        labels[half + c] = RowLabel(1, c, cls_label)
    if k < half:
        pinned = np.vstack([rows[:k], rows[half : half + k]])
        completion = gram_schmidt_extend(
            pinned, (basis_vector(d, i) for i in range(d)), d - 2 * k
        )
        free = list(range(k, half)) + list(range(half + k, d))
        rows[free] = completion

    class_map = {ops[i].label: c for c, grp in enumerate(groups) for i in grp}
    return RecoveryMatrix(
        code_name=code.name,
        matrix=rows,
        row_labels=tuple(labels),
        classes=tuple(tuple(ops[i].label for i in grp) for grp in groups),
        class_map=class_map,
    )


def recovery_row_order(code: Code) -> tuple[ErrorOperator, ...]:
    """Preset operator order for stacking recovery rows.

    For bitflip3 the X operators are listed in reverse qubit order
    (I, X_3, X_2, X_1), which makes the recovery a product of two permutation
    gates and the output ancilla diagonal read (p0, p3, p2, p1). The larger
    codes use their standard channel order unchanged.
    """
    ops = standard_error_set(code)
    if code.name == "bitflip3":
        return (ops[0], ops[3], ops[2], ops[1])
    return ops


@lru_cache(maxsize=None)
def recovery_for(code_name: str) -> RecoveryMatrix:
    """Cached recovery matrix for a built-in code in its preset row order."""
    code = get_code(code_name)
    return build_recovery(code, recovery_row_order(code))


def apply_recovery(recovery: RecoveryMatrix, rho_err: DensityMatrix) -> DensityMatrix:
    """R rho R^T."""
    if recovery.dim != rho_err.dim:
        raise ValueError(
            f"recovery dimension {recovery.dim} != state dimension {rho_err.dim}"
        )
    r = recovery.matrix
    return DensityMatrix(r @ rho_err.matrix @ r.T)


@lru_cache(maxsize=1)
def _bitflip3_projector_ops():
    ops = standard_error_set(get_code("bitflip3"))
    p07 = np.zeros((8, 8))
    p07[0, 0] = p07[7, 7] = 1.0
    return ops, p07


def conventional_recovery_bitflip3(rho_err: DensityMatrix) -> DensityMatrix:
    """Projective recovery channel for the 3-qubit code, used as a comparison
    oracle: apply every single bit flip, then project onto the code space
    spanned by |000> and |111>.

    On states reachable from the code space through the bit-flip channel this
    reproduces the encoded state exactly. The flipped copies of the two code
    basis vectors tile the whole space, so the projection preserves trace for
    any unit-trace input; the renormalization and zero-trace guards only
    engage on malformed input.
    """
    if rho_err.dim != 8:
        raise ValueError(f"expected an 8-dimensional state, got {rho_err.dim}")
    ops, p07 = _bitflip3_projector_ops()
    flipped = np.zeros_like(rho_err.matrix)
    for op in ops:
        flipped += op.conjugate(rho_err.matrix)
    projected = p07 @ flipped @ p07
    trace = float(np.trace(projected))
    if trace < 1e-12:
        raise ValueError("projection annihilated the state; input is outside the correctable family")
    if abs(trace - 1.0) > 1e-12:
        warnings.warn(
            f"projective recovery lost trace {1.0 - trace:.3e}; input is outside "
            "the correctable family, output renormalized",
            stacklevel=2,
        )
        projected = projected / trace
    return DensityMatrix(projected)


def sample_trajectory(
    channel: ErrorChannel, state: np.ndarray, seed: int
) -> tuple[int, np.ndarray]:
    """Draw one channel term index i with probability p_i and return
    (i, W_i @ state). A fresh generator is created from the seed, so equal
    seeds give equal draws."""
    state = np.asarray(state, dtype=float)
    if abs(float(state @ state) - 1.0) > 1e-9:
        raise ValueError("state must be normalized")
    rng = np.random.default_rng(seed)
    i = int(rng.choice(len(channel.terms), p=channel.probabilities))
    return i, channel.terms[i][1].apply(state)
