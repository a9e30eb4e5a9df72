# Configuration, errors and logging
