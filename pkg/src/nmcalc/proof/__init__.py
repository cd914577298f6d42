from .tree import ProofTree, count_rule_uses
from .check import ProofError, check_proof, is_valid
from .build import derive_all_phi
from .translate import translate_A_to_R, translate_R_to_A, translate_Rddsd_to_Add
from .search import Exhausted, Proved, ProveOutcome, SearchBudget, prove
from .cutelim import CutElimError, CutElimStats, eliminate_cuts
