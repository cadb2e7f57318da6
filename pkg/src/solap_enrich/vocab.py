"""Namespace IRIs for the cube vocabularies."""

from .rdf import Iri

QB = "http://purl.org/linked-data/cube#"
QB4O = "http://purl.org/qb4olap/cubes#"
QB4SO = "http://www.w3id.org/qb4solap#"
SKOS = "http://www.w3.org/2004/02/skos/core#"
GEO = "http://www.opengis.net/ont/geosparql#"
RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

PREFIXES = {
    "qb": QB,
    "qb4o": QB4O,
    "qb4so": QB4SO,
    "skos": SKOS,
    "geo": GEO,
    "rdf": RDF_NS,
    "xsd": XSD_NS,
}

RDF_TYPE = Iri(RDF_NS + "type")

QB_OBSERVATION = Iri(QB + "Observation")
QB_DSD = Iri(QB + "DataStructureDefinition")
QB_COMPONENT = Iri(QB + "component")
QB_MEASURE = Iri(QB + "measure")
QB_DATASET = Iri(QB + "dataSet")
QB_STRUCTURE = Iri(QB + "structure")

QB4O_LEVEL_MEMBER = Iri(QB4O + "LevelMember")
QB4O_MEMBER_OF = Iri(QB4O + "memberOf")
QB4O_HAS_HIERARCHY = Iri(QB4O + "hasHierarchy")
QB4O_IN_DIMENSION = Iri(QB4O + "inDimension")
QB4O_HAS_LEVEL = Iri(QB4O + "hasLevel")
QB4O_IN_HIERARCHY = Iri(QB4O + "inHierarchy")
QB4O_HIERARCHY_STEP = Iri(QB4O + "HierarchyStep")
QB4O_CHILD_LEVEL = Iri(QB4O + "childLevel")
QB4O_PARENT_LEVEL = Iri(QB4O + "parentLevel")
QB4O_PC_CARDINALITY = Iri(QB4O + "pcCardinality")
QB4O_LEVEL = Iri(QB4O + "level")
QB4O_CARDINALITY = Iri(QB4O + "cardinality")
QB4O_AGGREGATE_FUNCTION = Iri(QB4O + "aggregateFunction")
QB4O_DIMENSION_PROPERTY = Iri(QB4O + "DimensionProperty")
QB4O_HIERARCHY = Iri(QB4O + "Hierarchy")
QB4O_LEVEL_PROPERTY = Iri(QB4O + "LevelProperty")

SKOS_BROADER = Iri(SKOS + "broader")

QB4SO_PC_TOPO_REL = Iri(QB4SO + "pcTopoRel")
QB4SO_TOPOLOGICAL_RELATION = Iri(QB4SO + "topologicalRelation")
QB4SO_CONVEX_HULL = Iri(QB4SO + "ConvexHull")
QB4SO_UNION = Iri(QB4SO + "Union")
QB4SO_CENTROID = Iri(QB4SO + "Centroid")
QB4SO_MBR = Iri(QB4SO + "MBR")

GEO_SPATIAL_LITERAL = Iri(GEO + "spatialLiteral")
GEO_WKT_LITERAL = Iri(GEO + "wktLiteral")
DEFAULT_SPATIAL_DATATYPES = frozenset({GEO_SPATIAL_LITERAL, GEO_WKT_LITERAL})


def is_qb4so(iri) -> bool:
    return isinstance(iri, Iri) and iri.value.startswith(QB4SO)
