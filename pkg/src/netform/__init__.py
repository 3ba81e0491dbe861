"""Agent-based network formation under incomplete type information."""

from .beliefs import (BeliefTable, BiasParams, biased_base_beliefs,
                      complete_info_memory, effective_belief,
                      rational_anchor, rational_base_beliefs, sample_gamma)
from .dynamics import (RNG_ALGORITHM, Limits, RunOutcome, RunStatus, SimState,
                       StepResult, TraceEvent, apply_meeting, run, step)
from .experiments import (PRESETS, ConfigError, ExperimentConfig,
                          PopulationSpec, RunRecord, SweepAxis, aggregate,
                          derive_seed, export, load_config, run_paired, sweep)
from .metrics import (MetricsRecord, compute_metrics, discovery,
                      freeman_index, incremental_segregation,
                      inter_group_proportion, mean_degree)
from .model import (CostStructure, NetworkState, Population, StabilityReport,
                    StabilityWitness, actual_utility, deletion_gain,
                    distance_matrix, expected_cost,
                    expected_incremental_utility, geodesic_distances,
                    is_pairwise_stable)
from .oracle import (Thresholds, VerificationReport, belief_thresholds,
                     check_proposition, check_subset_relation,
                     enumerate_stable_states, is_complete_info_stable,
                     iter_graphs, stability_profile)

__version__ = "0.1.0"
