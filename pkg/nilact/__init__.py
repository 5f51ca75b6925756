"""Nilpotent group actions, G-commutator series, Frattini factors, localization
and the self-equivalence groups of Eilenberg-MacLane spaces."""

__version__ = "1.0.0"
