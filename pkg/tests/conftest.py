import hypothesis

# Property tests must behave identically on every run: no wall-clock
# deadlines (eigendecompositions vary with machine load) and derandomized
# example generation.
hypothesis.settings.register_profile(
    "ci", deadline=None, derandomize=True, max_examples=50
)
hypothesis.settings.load_profile("ci")
