"""Product and sum distribution layers and their sampling oracles."""

from .layers import (
    DistributionLayer,
    ProductDistributionLayer,
    SumDistributionLayer,
    gaussian_bump_kernels,
    mass_to_density,
    product_backward_kernel,
    product_forward,
    sum_backward_kernel,
    sum_forward,
    sum_overflow_mass,
)
from .montecarlo import (
    DivergenceReport,
    ZeroBinReport,
    bimodal_sampler,
    constant_sampler,
    divergence_check,
    expected_inverse_magnitude,
    grid_sampler,
    l1_density_distance,
    monte_carlo_product,
    normal_sampler,
    sample_density,
    verify_zero_bin_rule,
    write_density_csv,
)
from .tables import TripletTable, product_table, sum_table

__all__ = [
    "DistributionLayer",
    "DivergenceReport",
    "ProductDistributionLayer",
    "SumDistributionLayer",
    "TripletTable",
    "ZeroBinReport",
    "bimodal_sampler",
    "constant_sampler",
    "divergence_check",
    "expected_inverse_magnitude",
    "gaussian_bump_kernels",
    "grid_sampler",
    "l1_density_distance",
    "mass_to_density",
    "monte_carlo_product",
    "normal_sampler",
    "product_backward_kernel",
    "product_forward",
    "product_table",
    "sample_density",
    "sum_backward_kernel",
    "sum_forward",
    "sum_overflow_mass",
    "sum_table",
    "verify_zero_bin_rule",
    "write_density_csv",
]
