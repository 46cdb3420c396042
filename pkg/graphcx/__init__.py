"""Surgery maps on the graph complex and the identities they satisfy."""

__version__ = '0.1'
