"""learnlab API route modules."""
