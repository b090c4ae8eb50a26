"""secalign: compound MISO secrecy schemes, alignment machinery, and bounds.

Subpackages and modules:

- ``channel``: compound channel model, general-position checks, null spaces.
- ``align``: monomial sets, block precoders, structure maps, PAM parameters,
  constellation enumeration and nearest-point decoding.
- ``schemes``: the transmission schemes (nulling, alignment, ternary
  multilevel, erasure-coded multicast) reporting rate/leakage/DoF.
- ``analysis``: exact entropy oracles, closed-form DoF bounds, slope fits,
  Monte Carlo error estimation.
- ``cli``: batch front-end (``bounds``, ``sweep``, ``simulate``, ``verify``).
"""

__version__ = "0.1.0"
