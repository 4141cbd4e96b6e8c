"""
Tools for the biquotients Sp(3)//Sp(1)^2: representation enumeration, free-action certification,
cohomology invariants and numerical curvature checks.
"""
__version__ = '0.1.0'
