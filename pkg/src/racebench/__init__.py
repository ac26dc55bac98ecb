"""racebench: a deterministic 2D autonomous-racing workbench.

Simulator (single-track dynamics + ray-cast LiDAR), classical raceline
stack (minimum-curvature path, minimum-time speed profile, pure pursuit),
a from-scratch TD3 learner with two reward formulations, and a seeded
experiment harness exposed through a service API and CLI.
"""

__version__ = "0.1.0"
