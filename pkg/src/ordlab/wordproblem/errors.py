class BudgetExhausted(RuntimeError):
    """A resource cap was hit.  Not a statement about the group."""

    def __init__(self, budget: str, limit: int):
        self.budget = budget
        self.limit = limit
        super().__init__(f"{budget} budget exhausted (limit {limit})")


class WordProblemUndecided(RuntimeError):
    """Neither completion nor coset enumeration finished within budget."""

    def __init__(self, failures: list[BudgetExhausted]):
        self.failures = failures
        detail = "; ".join(str(f) for f in failures)
        super().__init__(f"word problem undecided: {detail}")
