# ================================================================================================
# 📈 QUADRATIC FORM - Energía discreta E(d) = ½dᵀKd + bᵀd + c
# ================================================================================================

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from ..exceptions.funcint_exceptions import DimensionMismatchException, NonSymmetricException
from .mesh import DofMap, DofPair


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class QuadraticForm:
    """
    📈 ENTIDAD - Energía global sobre los DOFs abiertos.

    ``b`` collects the couplings to prescribed values minus the external load,
    ``c`` every term independent of d (prescribed-value energy, load work on
    closed DOFs, bond constants). ``labels[i]`` is the (node, local dof) pair
    of open DOF i.
    """
    K: np.ndarray
    b: np.ndarray
    c: float
    labels: Tuple[DofPair, ...] = ()
    dofmap: Optional[DofMap] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        K = _frozen(np.atleast_2d(self.K)) if np.size(self.K) else _frozen(np.zeros((0, 0)))
        b = _frozen(np.atleast_1d(self.b)) if np.size(self.b) else _frozen(np.zeros(0))
        n = b.shape[0]
        if K.shape != (n, n):
            raise DimensionMismatchException("K", (n, n), K.shape)
        if n:
            asymmetry = float(np.max(np.abs(K - K.T)))
            if asymmetry > 1e-12 * max(1.0, float(np.max(np.abs(K)))):
                raise NonSymmetricException("K", asymmetry)
        if self.labels and len(self.labels) != n:
            raise DimensionMismatchException("labels", n, len(self.labels))
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "labels", tuple(tuple(p) for p in self.labels))

    @property
    def n(self) -> int:
        return self.b.shape[0]

    def energy(self, d: Sequence[float]) -> float:
        d = np.asarray(d, dtype=float)
        if d.shape != (self.n,):
            raise DimensionMismatchException("d", (self.n,), d.shape)
        return float(0.5 * d @ self.K @ d + self.b @ d + self.c)

    def shifted(
        self,
        dK: Optional[np.ndarray] = None,
        db: Optional[np.ndarray] = None,
        dc: float = 0.0,
    ) -> "QuadraticForm":
        """New form with (K + dK, b + db, c + dc); labels and dofmap kept."""
        K = self.K if dK is None else self.K + dK
        b = self.b if db is None else self.b + db
        return QuadraticForm(K, b, self.c + dc, self.labels, self.dofmap)
