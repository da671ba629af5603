from .errors import ConfigurationError
from .config import SMOOTHERS, SWEEP_ORDERS, RHO_RELAX


class SmootherConfig:

    """
    Vertical line smoother settings.

    Attributes
    ----------
    kind : str
        "block_sor" (sequential, latest values) or "block_jacobi" (parallel,
        all residuals from the previous iterate).
    rho_relax : float
        Overrelaxation factor in (0, 2).
    order : str
        Column traversal of block_sor: "natural" or "reversed".

    """

    def __init__(self, kind="block_sor", rho_relax=RHO_RELAX, order="natural"):

        if kind not in SMOOTHERS:
            raise ConfigurationError(f"Unknown smoother '{kind}'")
        if not 0.0 < rho_relax < 2.0:
            raise ConfigurationError(
                f"Relaxation factor must lie in (0, 2), got {rho_relax}"
            )
        if order not in SWEEP_ORDERS:
            raise ConfigurationError(f"Unknown sweep order '{order}'")
        self.kind = kind
        self.rho_relax = rho_relax
        self.order = order


    def to_dict(self):

        return {"kind": self.kind, "rho_relax": self.rho_relax, "order": self.order}
