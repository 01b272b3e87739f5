from pydantic import Field

from rational_white_noise.config import CalculusEntryPoint


class WhiteNoiseEntryPoint(CalculusEntryPoint):
    seed: int = Field(42, ge=0, lt=2**64, description='Default sampler seed.')
    samples: int = Field(100_000, ge=1, description='Default number of samples.')
    min_samples: int = Field(
        10_000, ge=1, description='Smallest sample count accepted by estimators.'
    )
    chunk_size: int = Field(
        65_536, ge=1, description='Samples drawn per counter block of the sampler.'
    )
    workers: int = Field(1, ge=1, description='Threads evaluating sample chunks.')
    quadrature_points: int = Field(
        60, ge=1, description='Nodes of the Gauss-Hermite quadrature oracle.'
    )

    def load(self):
        from rational_white_noise.whitenoise import general

        return general


configuration = WhiteNoiseEntryPoint(
    name='White noise',
    description="""Hermite polynomials, chaos elements under iid normal pairings and
    seeded Monte Carlo estimators.""",
)
