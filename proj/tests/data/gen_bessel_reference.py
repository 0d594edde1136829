# Regenerates bessel_reference.inc with mpmath at 40 digits.
import mpmath as mp

mp.mp.dps = 40
values = [(0, 0.5), (0, 10.0), (0.5, 3.0), (4 / 3, 0.7), (4 / 3, 25.0), (8 / 3, 4.0),
          (16 / 3, 5.0), (32 / 3, 12.0), (20.0, 15.0), (40.0, 100.0), (100.0, 80.0),
          (100.0, 150.0), (400 / 3, 400.0), (800 / 3, 300.0), (400.0, 750.0), (0.8, 1500.0),
          (50.5, 1200.0), (7.25, 0.01), (600.0, 700.0), (3.0, 1e-3)]
zeros = [(0, 1), (0, 10), (4 / 3, 1), (4 / 3, 50), (4.0, 3), (100.0, 1), (100.0, 20), (800 / 3, 5)]

with open("bessel_reference.inc", "w") as f:
    f.write("// nu, x, J_nu(x)\n#define BESSEL_J_VALUES \\\n")
    f.write(" \\\n".join("  {%r, %r, %s}," % (nu, x, mp.nstr(mp.besselj(nu, x), 20)) for nu, x in values))
    f.write("\n\n// nu, m, j_{nu,m}\n#define BESSEL_J_ZEROS \\\n")
    f.write(" \\\n".join("  {%r, %d, %s}," % (nu, m, mp.nstr(mp.besseljzero(nu, m), 20)) for nu, m in zeros))
    f.write("\n")
