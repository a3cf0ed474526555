"""
Replicator dynamics over type shares.
"""

from .replicator import DynamicsError, ReplicatorSimulator, TrajectoryPoint, simulate, write_trajectory_csv

__all__ = ['DynamicsError', 'ReplicatorSimulator', 'TrajectoryPoint', 'simulate', 'write_trajectory_csv']
