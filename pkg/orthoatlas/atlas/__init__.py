from .views import atlas_commands
