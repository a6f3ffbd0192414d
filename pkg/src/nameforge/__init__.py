"""Method-name robustness toolkit for code generation models.

Subpackages cover the full campaign pipeline: corpus records and signature
surgery (core), sub-word perturbation operators (morph), embedding lookup
(embeddings), CodeBLEU-family metrics (metrics), dataset curation (curation),
the genetic attack (attack), retrieval-based name defense (defense), model
endpoint I/O (modelio), and the batch CLI (cli).
"""

__version__ = "0.1.0"
