"""
Watching the resolution follow a burst
======================================

A quiet stream, a burst twenty times denser, then quiet again. We slice it
online and print what the slicer decided at every window boundary.
"""

from chronoslice import SlicerConfig, StreamingSlicer, synth_stream
from chronoslice.stats import ecdf, spread

# 50 timestamps at 1 contact each, 50 at 20, 50 at 1 again
events = synth_stream([(50, 1, 10), (50, 20, 30), (50, 1, 10)], seed=0)
print(f"{len(events)} events over {events[-1].t_orig + 1} timestamps")

# The slicer sees one event at a time. Closed windows come back as records.
slicer = StreamingSlicer(SlicerConfig(w_size=10, alpha=0.9, delta=0.2))
drawn = []
for e in events:
    remapped, closed = slicer.process_event(e)
    for rec in closed:
        print(f"window {rec.index:2d}  t=[{rec.t_ini:3d},{rec.t_end_orig:3d})  sigma={rec.sigma:2d}  "
              f"display {rec.display_span[0]}..{rec.display_span[1]}")
    if remapped is not None:
        drawn.append(remapped)
last = slicer.finish()[0]
print(f"window {last.index:2d}  t=[{last.t_ini:3d},{last.t_end_orig:3d})  sigma={last.sigma:2d}  (final)")

# Inside the burst several original timestamps share one display column, so
# the 150 original timestamps fit in far fewer columns.
series = spread(drawn)
print(f"\n{len(series)} display timestamps, {slicer.merged} repeated pairs merged")

# After the burst the resolution drops again, though the mean-of-history
# fallback keeps pulling it up for a while. The busiest column holds a whole
# burst window.
rep = ecdf(series)
print(f"empty columns {rep.empty_fraction:.1%}, busiest column {rep.max_count} events")
