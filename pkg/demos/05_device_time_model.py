"""
When would the device beat a classical solver?
==============================================

A closed-form cost model: each ansatz level on an N-vertex complete-graph
problem costs N concurrent two-qubit gate layers of 500 ns each, every energy
estimate costs M = 1000 shots, and probing level l replays an l-level
circuit, so total device time grows like p^2. The classical baseline is an
exponential fit, about 1.8 s at N = 300.

What decides everything is how the needed depth p scales with N.
"""

from levelq import TtsParams, crossover, p_scaling, tts_classical, tts_quantum

SIZES = range(100, 1001, 100)

print("        |   p(N) needed        |   device seconds")
print("   N    |  N^2/13.3  1.5N  log |  quadratic   linear      log       classical")
for n in SIZES:
    row = [f"{n:>6}  |"]
    times = []
    for law in ("quadratic", "linear", "log"):
        p = p_scaling(n, TtsParams(scaling=law))
        row.append(f"{p:>7}")
        times.append(tts_quantum(p, n, TtsParams(scaling=law)))
    row.append(" | ")
    row.extend(f"{t:>9.3g}  " for t in times)
    row.append(f"{tts_classical(n):>9.3g}")
    print(" ".join(row))

print()
for law in ("quadratic", "linear", "log"):
    point = crossover(TtsParams(scaling=law), range(2, 5001))
    if point is None:
        print(f"{law:>10}: no crossover below N=5000")
    else:
        t = tts_quantum(p_scaling(point, TtsParams(scaling=law)), point,
                        TtsParams(scaling=law))
        years = t / (365.25 * 24 * 3600)
        print(f"{law:>10}: quantum wins from N={point}"
              f" (needing {t:.3g} s = {years:.2g} years per instance)")

print("""
The moral: with p growing quadratically the 'win' costs decades per
instance; only slow depth growth (log N, crossing near N=479) makes the
model predict a practical advantage window.""")
