"""gaitalpha: real-time estimation of the weight distribution (stance
interpolation factor) of an exoskeleton user from joint kinematics.

Core subpackages:

- ``nn``: the from-scratch recurrent network, its gradients and optimizer
- ``gait``: trials, force-derived ground truth, synthetic gait generator
- ``training``: dataset assembly, training loop, metrics, cross-validation
- ``streaming``: per-sample inference runtime, latency bench, model files
- ``controlsim``: closed-loop consumer (stance blending and phase timing)
- ``service``/``cli``: HTTP service wrapping it all, and its thin client
"""

__version__ = "0.1.0"

from . import controlsim, errors, gait, nn, streaming, training  # noqa: F401
