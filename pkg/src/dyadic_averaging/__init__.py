"""dyadic-averaging: Dyadic averaging operators, Daubechies wavelets and discrete Besov/Triebel-Lizorkin quasi-norms."""

__version__ = "0.1.0"
