"""Borsuk number 4, Vázsonyi configurations and Reuleaux polyhedra in R^3.

The package is organised as

* :mod:`reuleaux.geometry`  -- point sets, ball polyhedra, classification
* :mod:`reuleaux.graphcore` -- embedded planar graphs, involutions, colouring
* :mod:`reuleaux.generator` -- involutive graphs from odd wheels
* :mod:`reuleaux.realize`   -- numerical Reuleaux realizations
* :mod:`reuleaux.borsuk`    -- Borsuk numbers and the critical partition
"""

__version__ = "0.1.0"
