import jax

# every quantity here lives inside an exponential; float32 is not enough
jax.config.update("jax_enable_x64", True)
