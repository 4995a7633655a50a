"""Classical analysis of PT-symmetric coupled-oscillator networks."""
