"""Design-ideation toolkit: per-domain generative models over patent titles.

Pipeline: ingest domain corpora, pair each title with its representative
keyword, fine-tune a small causal language model per domain, generate
keyword-conditioned ideas, and score each idea's novelty by the minimum
pairwise term relevancy.
"""

__version__ = "0.1.0"
