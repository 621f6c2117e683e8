"""Built-in measurement fixtures, including the pre-processing counterexample.

The counterexample is a pair of commuting two-outcome projective qutrit
measurements that becomes incompatible after pre-processing through a
unital qutrit-to-qubit channel, demonstrating that commutation-based
incompatibility can be created by pre-processing. The matrices are stored
with their exact closed-form entries (sqrt(2)/3, 1/(2 sqrt(3)), 1/2,
1/sqrt(6), 1/sqrt(2)) evaluated to double precision.
"""

from __future__ import annotations

import math

import numpy as np

from . import povm as povm_mod
from .errors import DomainError
from .incompat import upsilon
from .povm import KrausChannel, Povm

FIXTURE_KINDS = (
    "mub-pair",
    "computational",
    "random-basis",
    "random-rank1",
    "paper-qutrit-EF",
    "paper-kraus-channel",
)


def preprocessing_counterexample_pair() -> tuple[Povm, Povm]:
    """The commuting two-outcome projective qutrit pair of the counterexample."""
    e1 = np.diag([1.0, 1.0, 0.0]).astype(np.complex128)
    f1 = np.diag([1.0, 0.0, 1.0]).astype(np.complex128)
    e = Povm.from_operators([e1, np.eye(3) - e1])
    f = Povm.from_operators([f1, np.eye(3) - f1])
    return e, f


def preprocessing_counterexample_channel() -> KrausChannel:
    """Unital channel whose Heisenberg dual maps the qutrit pair to qubit measurements."""
    s2, s3, s6 = math.sqrt(2.0), math.sqrt(3.0), math.sqrt(6.0)
    k1 = (s2 / 3.0) * np.array([[1.0, 0.0], [1.0, 0.0], [-1.0, 0.0]])
    k2 = np.array(
        [
            [-1.0 / (2.0 * s3), 0.5],
            [1.0 / (2.0 * s3), -0.5],
            [0.0, 0.0],
        ]
    )
    k3 = np.array([[-1.0 / s6, -1.0 / s2], [0.0, 0.0], [0.0, 0.0]])
    return KrausChannel.from_operators([k1, k2, k3])


def preprocess_demo_values(p: float) -> dict:
    """Incompatibility of the counterexample pair before and after pre-processing."""
    e, f = preprocessing_counterexample_pair()
    channel = preprocessing_counterexample_channel()
    before = upsilon(e, f, p).value
    after = upsilon(
        povm_mod.pre_process(e, channel), povm_mod.pre_process(f, channel), p
    ).value
    return {"p": float(p), "before": before, "after": after}


def fixture_generate(kind: str, d: int | None = None, n: int | None = None, seed: int | None = None) -> dict:
    """Build the named fixture objects, keyed by their canonical file names.

    Values are Povm or KrausChannel instances; callers serialize them.
    """
    if kind == "mub-pair":
        if d is None:
            raise DomainError("mub-pair needs a dimension")
        e, f = povm_mod.mub_pair(d)
        return {f"mub_d{d}_e.json": e, f"mub_d{d}_f.json": f}
    if kind == "computational":
        if d is None:
            raise DomainError("computational needs a dimension")
        return {f"computational_d{d}.json": povm_mod.computational_basis(d)}
    if kind == "random-basis":
        if d is None or seed is None:
            raise DomainError("random-basis needs a dimension and a seed")
        return {f"random_basis_d{d}_seed{seed}.json": povm_mod.random_basis(d, seed)}
    if kind == "random-rank1":
        if d is None or n is None or seed is None:
            raise DomainError("random-rank1 needs a dimension, an outcome count and a seed")
        return {
            f"random_rank1_d{d}_n{n}_seed{seed}.json": povm_mod.random_rank1_povm(d, n, seed)
        }
    if kind == "paper-qutrit-EF":
        e, f = preprocessing_counterexample_pair()
        return {"paper-qutrit-E.json": e, "paper-qutrit-F.json": f}
    if kind == "paper-kraus-channel":
        return {"paper-kraus-channel.json": preprocessing_counterexample_channel()}
    raise DomainError(f"unknown fixture kind {kind!r}; expected one of {FIXTURE_KINDS}")
