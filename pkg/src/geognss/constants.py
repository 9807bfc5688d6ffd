# Physical constants. All distances km, times s, angles rad unless noted.

MU_EARTH = 398600.4418      # km^3/s^2, WGS-84 gravitational parameter
R_EARTH = 6378.137          # km, WGS-84 equatorial radius
C_LIGHT = 299792458.0       # m/s
BOLTZMANN_DBW = -228.5991672  # 10*log10(1.380649e-23), dBW/K/Hz

SECONDS_PER_DAY = 86400.0
