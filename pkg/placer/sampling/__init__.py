# Sampling module for degree-weighted net batches
from .sampler import (
    SamplingPlan,
    build_plan,
    default_batch_size,
    default_temperature,
    sample_batch,
    uniform_plan,
)

__all__ = ['SamplingPlan', 'build_plan', 'sample_batch', 'uniform_plan',
           'default_temperature', 'default_batch_size']
