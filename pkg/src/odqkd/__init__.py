"""
Open-destination MDI-QKD network simulator.

Subpackages: core (contracts), quantum (density-matrix backend), protocol (records, sifting and
the truth-table oracle), detector (equivalent-detector model and sampler), keyrate (analytic
rates and sweeps), netsim (star network and Monte Carlo sessions) and io (config and artifacts).
The `odqkd` console script lives in odqkd.cli.
"""

__version__ = "0.1.0"
