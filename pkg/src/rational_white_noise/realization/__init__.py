from pydantic import Field

from rational_white_noise.config import CalculusEntryPoint


class RealizationEntryPoint(CalculusEntryPoint):
    tolerance: float = Field(
        1e-9, gt=0, description='Tolerance of realization identity checks.'
    )
    condition_warning: float = Field(
        1e12,
        gt=1,
        description='Pencil condition number above which evaluation logs a warning.',
    )

    def load(self):
        from rational_white_noise.realization import general

        return general


configuration = RealizationEntryPoint(
    name='Realization',
    description="""State space realizations D + C (I - z A)^-1 z B and their
    products, sums and inverses.""",
)
