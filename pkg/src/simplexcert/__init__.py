"""Exact sign certificates for forms on the standard simplex."""
from .expansion import SignClass, expand, expand_barycentric, expand_word, sign_classify
from .kernels import BACKEND
from .polyring import Form, ParseError, StructureError, evaluate, parse_form, serialize_form
from .simplexgeo import SimplexMatrix, barycentric_matrix, diameter, product_chain, shrink_simplex

__version__ = "0.1.0"
