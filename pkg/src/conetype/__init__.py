"""Self-similar trees from DFAs."""
