"""Density of successful receptions in random D2D networks with caching.

Modules: ``numerics`` (quadrature, roots, special functions), ``fading``
(fading laws and the interference functional beta), ``coverage`` (coverage
probabilities), ``singlefile`` (optimal transmitter fraction), ``caching``
(multi-file caching optimization), ``strategies`` (transmission weights and
simultaneous-transmission models), ``mcsim`` (Monte Carlo validation) and
``cli`` (experiment runner).
"""

__version__ = "0.1.0"
