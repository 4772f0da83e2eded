class Report(dict):
    """Flag name -> bool. Extra, non-flag data lives in ``details``."""

    def __init__(self, flags=(), **details):
        super().__init__(flags)
        self.details = details

    @property
    def ok(self):
        return all(self.values())

    def failed(self):
        return [k for k, v in self.items() if not v]

    def __getattr__(self, name):
        try:
            return self[name]
        except KeyError:
            raise AttributeError(name) from None

    def __repr__(self):
        body = ", ".join(f"{k}={v}" for k, v in self.items())
        return f"Report({body})"


class AxiomError(ValueError):
    """A precondition flag failed; ``flags`` names the failures."""

    def __init__(self, what, flags):
        self.flags = list(flags)
        super().__init__(f"{what}: failed {', '.join(self.flags)}")


def require(report, names, what):
    bad = [n for n in names if not report[n]]
    if bad:
        raise AxiomError(what, bad)
