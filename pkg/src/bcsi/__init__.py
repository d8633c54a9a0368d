"""Rate regions, capacity special cases, and coding experiments for
three-receiver broadcast channels with non-causal side information.

All information quantities are in nats.
"""

from .prob import (
    Alphabet,
    CompositionError,
    CondKernel,
    FinitePmf,
    LabelError,
    compose_joint,
    conditional_mutual_information,
    entropy,
    mutual_information,
    random_kernel,
    random_pmf,
)
from .channels import (
    ConsistentAfter,
    Counterexample,
    Degraded,
    DetFunctionTable,
    LessNoisyChannel,
    MbcChannel,
    NotDegraded,
    augment_receivers,
    check_degraded,
    detect_deterministic,
    falsify_less_noisy,
    load_channel,
    receiver_kernel,
    validate,
)
from .regions import (
    AuxScheme,
    RateRegion2,
    RateRegion3,
    SearchConfig,
    ln_capacity,
    ln_inner_fixed,
    ln_inner_region,
    mbc_capacity,
    mbc_inner_fixed,
    mbc_inner_region,
)
from .fm import (
    BlowupError,
    LinIneqSystem,
    Row,
    build_pre_fm,
    fm_eliminate,
    minimal_2d,
    project_to_rates,
)
from .coding import Codebooks, SimConfig, SimResult, TypicalityTest, build_codebooks, encode, is_typical, simulate
from .wdp import WdpParams, beta_star, rate_of_beta, wdp_rates
from .aen import AenParams, aen_inner, aen_outer, erlang2_entropy

__version__ = "0.1.0"
