from django import forms

from .applications.collision_query import METHODS, NORMAL
from .applications.minkowski_cf import CONTACT, MODES

# Largest grids the API computes per request
MAX_GRID = {2: 20000, 3: 200}


class GridForm(forms.Form):
    """Grid size shared by the cloud and validation endpoints"""
    grid = forms.IntegerField(min_value=1, required=False)

    def clean_grid(self):
        grid = self.cleaned_data.get('grid')
        return grid or 64

    def check_grid_for(self, dim):
        """Grid limits depend on the bodies' dimension, known only after parsing them"""
        grid = self.cleaned_data['grid']
        if dim == 3 and grid < 3:
            raise forms.ValidationError("A 3D grid needs at least 3 angles.")
        if grid > MAX_GRID[dim]:
            raise forms.ValidationError(
                f"Grid {grid} is too large for {dim}D (at most {MAX_GRID[dim]}).")
        return grid


class MinkSumForm(GridForm):
    """Options for computing a boundary cloud"""
    mode = forms.ChoiceField(choices=[(m, m) for m in MODES], required=False)

    def clean_mode(self):
        return self.cleaned_data.get('mode') or CONTACT


class CollideForm(forms.Form):
    """Options for a proximity query"""
    method = forms.ChoiceField(choices=[(m, m) for m in METHODS], required=False)

    def clean_method(self):
        return self.cleaned_data.get('method') or NORMAL
