import hypothesis

# Special-function property tests evaluate continued fractions thousands of
# times per example; the default deadline trips on slow CI boxes.
hypothesis.settings.register_profile(
    "spectra", deadline=None, max_examples=60, derandomize=True
)
hypothesis.settings.load_profile("spectra")
