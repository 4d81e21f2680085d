"""
Power-budget alerts over a synthetic stream
===========================================

A seeded synthetic home with 20 sensors feeds the window engine in
high-utility mode.  Any pattern whose power in the current window exceeds
a budget becomes an alert record, the same records ``fpstream anomaly``
prints.
"""

from fpstream import MiningRequest, UtilityTable, WindowConfig, WindowMiner, generate_stream
from fpstream.cli import alert_record
from fpstream.synth import sensor_names

names = sensor_names(20)
# a few heavy appliances among many light sensors
watts = UtilityTable({s: (1500 if i % 7 == 0 else 5) for i, s in enumerate(names)})

engine = WindowMiner(WindowConfig(3, 100), MiningRequest("high-utility", min_utility=20_000), watts)
budget = 40_000
alerts = 0
for result in engine.run(generate_stream(20, 1200, 0.15, seed=11)):
    over = [p for p in result if p.utility > budget]
    alerts += len(over)
    for p in over[:2]:
        print(alert_record(result.window_id, p.pattern, p.utility))
print(f"{engine.batches_completed} batches, {alerts} alerts above {budget} W")
