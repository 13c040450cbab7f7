from hypothesis import settings

settings.register_profile("package", deadline=None, max_examples=60)
settings.load_profile("package")
