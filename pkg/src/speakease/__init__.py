"""speakease: an expressive AAC engine.

Multimodal input (text, emoji, dysarthric-speech transcripts) becomes four
context-aware candidate utterances; the human-selected candidate is spoken
through an emotion-banked personalized voice; an append-only hash-chained
ledger records every selection so authorship is always provable.
"""

__version__ = "0.1.0"
