# neural - k->n->1 network trained by particle swarm, stock picking, hyperparameter search
