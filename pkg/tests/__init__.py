# Tests for the Paraboloid Float toolkit
