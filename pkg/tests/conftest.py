from hypothesis import settings

# reproducible property runs; several properties evaluate slow special functions
settings.register_profile("repo", derandomize=True, deadline=None, print_blob=True)
settings.load_profile("repo")
