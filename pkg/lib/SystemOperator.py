from .stencil import apply_operator


class SystemOperator:

    """
    Matrix-free operator of the system being solved.

    Attributes
    ----------
    hatted : HattedCoefficients
    applications : int
        Number of products computed so far.

    """

    def __init__(self, hatted):

        self.hatted = hatted
        self.applications = 0


    @property
    def shape(self):

        return self.hatted.shape


    @property
    def level_index(self):

        return self.hatted.level_index


    def apply(self, u):

        self.applications += 1
        return apply_operator(self.hatted, u)
