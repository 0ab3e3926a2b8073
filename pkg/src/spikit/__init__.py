"""Safe Pareto improvements for finite normal-form games, in exact rational arithmetic."""

from .disarm import search_disarmament, verify_disarmament
from .game import (CorrelatedProfile, Disarmament, Game, GameFormatError, Pareto, SizeCapExceeded, SpikitError,
                   expected_payoff, game_from_dict, game_from_json, game_to_dict, game_to_json, pareto_compare,
                   payoff_set, remove_actions)
from .generators import gen_paper_game, random_game
from .iso import (Isomorphism, exists_coeff10_iso, exists_pareto_improving_iso, find_isomorphisms,
                  find_partial_isomorphisms, find_subgame_isomorphisms)
from .lp import LinearProgram, solve, solve_lex
from .reduction import is_strictly_dominated, reduce
from .remap import omni_exists, omni_optimize, uni_search, uni_verify
from .results import Attained, NoSpi, Supremum
from .spi import SpiCertificate, compose_correspondences, is_simple_spi, is_spi
from .tokens import (characterize_2p, correlated_iso_token_spi, gpr_decide, optimize_token, pure_iso_token_spi,
                     simple_token_spi)
from .verify import to_certificate, verify_certificate

__version__ = "0.1.0"
