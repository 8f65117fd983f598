"""Ontology management engine for image repositories.

Subpackages: `model` (typed ontology + derivations), `damlio` (DAML+OIL XML
subset), `consistency` (checks, guarded edits, instance validation), `store`
(relational persistence with split property tables), `query` (triple queries
compiled to SQL plus a reference evaluator), `viz` (graph views and layouts),
`service`/`cli` (HTTP and command-line surfaces).
"""

__version__ = "0.1.0"
