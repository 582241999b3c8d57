"""Minimax packet-alteration policies against watering-hole attackers."""

from .best_response import (
    best_response_dp,
    best_response_exact,
    best_response_greedy,
    best_response_relaxed,
    best_response_value,
    best_response_value_bounded,
)
from .baselines import solve_all_actions, solve_max_effort
from .colgen import CgConfig, cybertweak, greedytweak
from .dominance import find_dominated_websites, reduce_instance
from .model import (
    AttackPlan,
    DefenderStrategy,
    GameInstance,
    SolveResult,
    Website,
    evaluate_objective,
    generate_instance,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    save_instance,
    validate,
)
from .relaxation import check_optimality, solve_relaxed_p1
from .special_cases import detect_case, solve_small_effort, solve_uniform_cost

__version__ = "0.1.0"

__all__ = [
    "AttackPlan",
    "CgConfig",
    "DefenderStrategy",
    "GameInstance",
    "SolveResult",
    "Website",
    "best_response_dp",
    "best_response_exact",
    "best_response_greedy",
    "best_response_relaxed",
    "best_response_value",
    "best_response_value_bounded",
    "check_optimality",
    "cybertweak",
    "detect_case",
    "evaluate_objective",
    "find_dominated_websites",
    "generate_instance",
    "greedytweak",
    "instance_from_dict",
    "instance_to_dict",
    "load_instance",
    "reduce_instance",
    "save_instance",
    "solve_all_actions",
    "solve_max_effort",
    "solve_relaxed_p1",
    "solve_small_effort",
    "solve_uniform_cost",
    "validate",
]
