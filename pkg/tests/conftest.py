from hypothesis import settings

# Matrix-valued examples can be slow on first compile of the BLAS path;
# derandomize keeps runs reproducible without a frozen database.
settings.register_profile("hardylab", deadline=None, derandomize=True, max_examples=40)
settings.load_profile("hardylab")
