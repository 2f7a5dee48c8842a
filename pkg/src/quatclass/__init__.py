"""Class numbers of Eichler orders in quaternion algebras over Q and real quadratic fields."""

__version__ = "0.1.0"
