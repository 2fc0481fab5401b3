use pyo3::prelude::*;
use pyo3::types::PyDict;

fn check(script: &std::ffi::CStr) {
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(ldic::ldic)(py);
        let globals = PyDict::new(py);
        globals.set_item("ldic", module).unwrap();
        if let Err(e) = py.run(script, Some(&globals), None) {
            e.display(py);
            panic!("python check failed: {e}");
        }
    });
}

#[test]
fn region_and_gains() {
    check(cr#"
from fractions import Fraction
p = ldic.ChannelParams(20, 15, 12, 13)
assert ldic.capacity_region(p).vertices() == [(0, 0), (20, 0), (18, 4), (14, 8), (0, 15)]
assert ldic.capacity_region(p) == ldic.achievable_region(p)
g = ldic.gain_report(p.with_feedback(20, 15))
assert (g["delta1"], g["delta2"], g["sigma"]) == (7, Fraction(7, 2), 0)
assert ldic.converse_bounds(p)["r1"] == 20
assert ldic.regimes(p) == ldic.regimes(p.swapped())[::-1]
"#);
}

#[test]
fn bit_level_functions() {
    check(cr#"
p = ldic.ChannelParams(3, 2, 1, 2, 3, 2)
y1, y2 = ldic.forward("100", "010", p)
assert len(y1) == p.q and len(y2) == p.q
t = ldic.simulate(p, uses=2, policy="impulse", user=2, level=1, at_use=1)
assert t[0]["x2"] == "100" and t[0]["x1"] == "000"
assert t[1]["fb2"] == ldic.feedback_signal(t[0]["y2"], p, 2)
for bad in (lambda: ldic.forward("10", "010", p), lambda: ldic.simulate(p, policy="loud"), lambda: ldic.decompose(p, 3)):
    try:
        bad()
    except ValueError:
        pass
    else:
        raise AssertionError("accepted bad input")
"#);
}
