"""Nash and secure equilibria from win/lose determinacy."""

from .games import (
    MatrixGame,
    MatrixGameForm,
    PayoffTable,
    Player,
    Profile,
    WinLoseLabeling,
    enumerate_nash,
    is_determined_form,
    is_nash,
)
from .poset import BinaryRelation, Poset, lift_less, transitive_closure
from .priority import Arena, PriorityGame, secure_equilibrium_priority, verify_priority_secure
from .secure import is_secure, malevolent_prefs, secure_equilibrium
from .transfer import DeterminacyOracle, NotDetermined, OracleUnsound, TransferResult, equilibrium_transfer, matrix_oracle

__all__ = [
    "Arena",
    "BinaryRelation",
    "DeterminacyOracle",
    "MatrixGame",
    "MatrixGameForm",
    "NotDetermined",
    "OracleUnsound",
    "PayoffTable",
    "Player",
    "Poset",
    "PriorityGame",
    "Profile",
    "TransferResult",
    "WinLoseLabeling",
    "enumerate_nash",
    "equilibrium_transfer",
    "is_determined_form",
    "is_nash",
    "is_secure",
    "lift_less",
    "malevolent_prefs",
    "matrix_oracle",
    "secure_equilibrium",
    "secure_equilibrium_priority",
    "transitive_closure",
    "verify_priority_secure",
]

__version__ = "0.1.0"
