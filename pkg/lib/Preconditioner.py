from .Field import Field


class Preconditioner:

    """
    Preconditioner action u = M^{-1} r.

    With a multigrid hierarchy the action is mu V-cycles from a zero initial
    guess; without one it is the identity.

    Attributes
    ----------
    hierarchy : MultigridHierarchy or None
    mu : int
    label : str
        Name reported in the artifacts.
    applications : int
        Number of actions computed so far.

    """

    def __init__(self, hierarchy=None, mu=1, label="none"):

        self.hierarchy = hierarchy
        self.mu = mu
        self.label = label
        self.applications = 0


    def apply(self, r):

        self.applications += 1
        if self.hierarchy is None:
            return Field(r.values.copy(), r.level_index)
        return self.hierarchy.apply(r, self.mu)
