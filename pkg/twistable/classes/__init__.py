from .surface import SurfaceType, Surface, Triangulation
from .multicurve import CurvePool, NormalMulticurve, Subsurface
from .annulus import Annulus, AnnulusSystem, Brick, KComplexity, Smallness
from .arc import GSDeltaVertex, NormalArcSystem
from .config import RunConfig
from .decomposition import AbstractDecomposition, AbstractPiece
from .graph import Ball, Distance, GraphSpec, TightGeodesic
from .report import AuditReport, ProjectionSet
