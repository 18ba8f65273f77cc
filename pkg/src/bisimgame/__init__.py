"""Behavioural equivalence of finite transition systems, the spoiler/duplicator
game, and distinguishing modal formulas."""

from .coalgebra import (Coalgebra, CoalgebraError, LtsObs, ProbObs, enumerate_f2,
                        leq, observe, successors, validate)
from .csvio import dumps, load, loads, save
from .game import (GameError, GameState, Phase, Step1Move, Step2Move, Step3Move,
                   Step4Move, advance, duplicator_pick, duplicator_predicate,
                   engine_move, new_game, spoiler_move, spoiler_pick,
                   validate_step2)
from .logic import (AtLeast, Box, Closed, Cone, Conj, Dia, Disj, FF,
                    IsTerminate, Modal, Neg, TT, closure, distinguishing_formula,
                    eval_formula, eval_modality, is_strongly_separating,
                    parse_formula, print_formula, recode_finite, recode_for,
                    recode_prob)
from .refine import INF, Partition, StrategyTable, f_alpha_step, refine

__all__ = [name for name in dir() if not name.startswith("_")]
