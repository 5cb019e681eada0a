"""
Instance and report files
=========================

Instances round-trip through JSON, and reports record the input hash and
seed so a verdict can be replayed exactly.  The same files drive the
``opjensen`` command.
"""

import json

import numpy as np

from opjensen.convexfn import catalog
from opjensen.instances import canonical_hash, dumps, instance_from_json, instance_to_json, report_to_json
from opjensen.jensen import JensenInstance, check_conditional
from opjensen.jointspec import CubeDomain
from opjensen.linalg import DEFAULT_POLICY
from opjensen.sampling import random_context, random_tuple_field, random_unital_field

rng = np.random.default_rng(7)
f = catalog("p_norm", {"p": 2.0}, 2)
dom = CubeDomain.uniform(-2, 2, 2)
inst = JensenInstance(random_context(rng, 3, 2), random_unital_field(rng, 3, 2),
                      random_tuple_field(rng, 3, 2, dom), f, dom)

obj = json.loads(dumps(instance_to_json(inst, seed=7)))
print("keys:", sorted(obj))
print("first rho entry (complex as [re, im]):", obj["rho"][0][0])

again, seed = instance_from_json(obj)
r1, r2 = check_conditional(inst), check_conditional(again)
print("margins equal after round trip:", np.array_equal(r1.margins, r2.margins))

report = report_to_json(r2, DEFAULT_POLICY, canonical_hash(obj), seed)
print(dumps(report))
print("equivalent command:  opjensen check instance.json")
