from pydantic import Field

from rational_white_noise.config import CalculusEntryPoint


class FueterEntryPoint(CalculusEntryPoint):
    default_degree: int = Field(
        4, ge=0, description='Truncation degree of von Neumann series.'
    )

    def load(self):
        from rational_white_noise.fueter import general

        return general


configuration = FueterEntryPoint(
    name='Fueter',
    description="""Quaternionic polynomials, Cauchy-Kovalevskaya extension and
    Fueter monomials.""",
)
