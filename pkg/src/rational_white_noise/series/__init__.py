from pydantic import Field

from rational_white_noise.config import CalculusEntryPoint


class SeriesEntryPoint(CalculusEntryPoint):
    tolerance: float = Field(
        1e-12, gt=0, description='Tolerance of floating point identity checks.'
    )

    def load(self):
        from rational_white_noise.series import general

        return general


configuration = SeriesEntryPoint(
    name='Series',
    description="""Truncated chaos and power series with the Wick product, the
    Hermite transform, norms and backward shifts.""",
)
