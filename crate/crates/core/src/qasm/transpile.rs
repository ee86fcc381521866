use super::circuit::{Circuit, Gate, GateKind};
use super::FrontendError;
use crate::phase::Angle;

/// Lower every gate to the rotation basis `{Rx, Rz, H, CX, CZ}`.
///
/// Rotations keep their exact π-multiples. Identity gates disappear. The
/// result agrees with the input up to a global phase.
pub fn transpile_to_basis(c: &Circuit) -> Result<Circuit, FrontendError> {
    let mut out = Circuit::new(c.num_qubits);
    out.measured = c.measured.clone();
    for g in &c.gates {
        c.check(g)?;
        lower(g, &mut out.gates);
    }
    Ok(out)
}

fn rz(q: usize, a: Angle) -> Gate {
    Gate::rotation(GateKind::Rz, q, a)
}

fn rx(q: usize, a: Angle) -> Gate {
    Gate::rotation(GateKind::Rx, q, a)
}

fn cx(a: usize, b: usize) -> Gate {
    Gate::two(GateKind::CX, a, b)
}

fn pi(n: i64, d: i64) -> Angle {
    Angle::pi_frac(n, d)
}

fn u3(out: &mut Vec<Gate>, q: usize, theta: Angle, phi: Angle, lambda: Angle) {
    // U3 = Rz(φ)·Ry(θ)·Rz(λ) and Ry(θ) = Rz(π/2)·Rx(θ)·Rz(-π/2)
    out.push(rz(q, lambda - pi(1, 2)));
    out.push(rx(q, theta));
    out.push(rz(q, phi + pi(1, 2)));
}

fn lower(g: &Gate, out: &mut Vec<Gate>) {
    use GateKind::*;
    let q = &g.qubits;
    let p = &g.params;
    match g.kind {
        Id => {}
        Rx | Rz | H | CX | CZ => out.push(g.clone()),
        X => out.push(rx(q[0], pi(1, 1))),
        Y => {
            out.push(rz(q[0], pi(1, 1)));
            out.push(rx(q[0], pi(1, 1)));
        }
        Z => out.push(rz(q[0], pi(1, 1))),
        S => out.push(rz(q[0], pi(1, 2))),
        Sdg => out.push(rz(q[0], pi(-1, 2))),
        T => out.push(rz(q[0], pi(1, 4))),
        Tdg => out.push(rz(q[0], pi(-1, 4))),
        Sx => out.push(rx(q[0], pi(1, 2))),
        Sxdg => out.push(rx(q[0], pi(-1, 2))),
        Ry => {
            out.push(rz(q[0], pi(-1, 2)));
            out.push(rx(q[0], p[0]));
            out.push(rz(q[0], pi(1, 2)));
        }
        U1 => out.push(rz(q[0], p[0])),
        U2 => u3(out, q[0], pi(1, 2), p[0], p[1]),
        U3 => u3(out, q[0], p[0], p[1], p[2]),
        CY => {
            out.push(rz(q[1], pi(-1, 2)));
            out.push(cx(q[0], q[1]));
            out.push(rz(q[1], pi(1, 2)));
        }
        CH => {
            let (a, b) = (q[0], q[1]);
            out.push(Gate::single(H, b));
            out.push(rz(b, pi(-1, 2)));
            out.push(cx(a, b));
            out.push(Gate::single(H, b));
            out.push(rz(b, pi(1, 4)));
            out.push(cx(a, b));
            out.push(rz(b, pi(1, 4)));
            out.push(Gate::single(H, b));
            out.push(rz(b, pi(1, 2)));
            out.push(rx(b, pi(1, 1)));
            out.push(rz(a, pi(1, 2)));
        }
        Swap => {
            out.push(cx(q[0], q[1]));
            out.push(cx(q[1], q[0]));
            out.push(cx(q[0], q[1]));
        }
        CCX => toffoli(out, q[0], q[1], q[2]),
        CSwap => {
            out.push(cx(q[2], q[1]));
            toffoli(out, q[0], q[1], q[2]);
            out.push(cx(q[2], q[1]));
        }
        CRz => {
            out.push(rz(q[1], p[0].half()));
            out.push(cx(q[0], q[1]));
            out.push(rz(q[1], -p[0].half()));
            out.push(cx(q[0], q[1]));
        }
        CU1 => {
            let h = p[0].half();
            out.push(rz(q[0], h));
            out.push(cx(q[0], q[1]));
            out.push(rz(q[1], -h));
            out.push(cx(q[0], q[1]));
            out.push(rz(q[1], h));
        }
        CU3 => {
            let (c, t) = (q[0], q[1]);
            let (theta, phi, lambda) = (p[0], p[1], p[2]);
            out.push(rz(c, (lambda + phi).half()));
            out.push(rz(t, (lambda - phi).half()));
            out.push(cx(c, t));
            u3(out, t, -theta.half(), Angle::zero(), -(phi + lambda).half());
            out.push(cx(c, t));
            u3(out, t, theta.half(), phi, Angle::zero());
        }
        Rzz => {
            out.push(cx(q[0], q[1]));
            out.push(rz(q[1], p[0]));
            out.push(cx(q[0], q[1]));
        }
    }
}

fn toffoli(out: &mut Vec<Gate>, a: usize, b: usize, c: usize) {
    let t = |q| rz(q, pi(1, 4));
    let tdg = |q| rz(q, pi(-1, 4));
    out.extend([
        Gate::single(GateKind::H, c),
        cx(b, c),
        tdg(c),
        cx(a, c),
        t(c),
        cx(b, c),
        tdg(c),
        cx(a, c),
        t(b),
        t(c),
        Gate::single(GateKind::H, c),
        cx(a, b),
        t(a),
        tdg(b),
        cx(a, b),
    ]);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gates;
    use crate::sim::unitary_of;

    fn lowered(g: Gate) -> Circuit {
        let n = g.qubits.iter().max().unwrap() + 1;
        transpile_to_basis(&Circuit::new(n).with(g)).unwrap()
    }

    #[test]
    fn t_is_a_quarter_rotation() {
        assert_eq!(lowered(Gate::single(GateKind::T, 0)).gates, vec![rz(0, pi(1, 4))]);
    }

    #[test]
    fn x_is_a_half_turn_about_x() {
        assert_eq!(lowered(Gate::single(GateKind::X, 0)).gates, vec![rx(0, pi(1, 1))]);
    }

    #[test]
    fn toffoli_matches_the_permutation_matrix() {
        let c = lowered(Gate::new(GateKind::CCX, &[0, 1, 2], &[]));
        assert!(c.is_basis());
        let u = unitary_of(&c).unwrap();
        assert!(u.distance_up_to_scalar(&gates::toffoli()) <= 1e-10);
    }

    #[test]
    fn every_gate_kind_is_lowered_soundly() {
        use GateKind::*;
        let a = Angle::pi_frac(1, 3);
        let b = Angle::Radians(0.77);
        let d = Angle::pi_frac(-5, 4);
        let cases = [
            Gate::single(Y, 0),
            Gate::single(Sx, 0),
            Gate::single(Sxdg, 0),
            Gate::rotation(Ry, 0, b),
            Gate::new(U2, &[0], &[a, b]),
            Gate::new(U3, &[0], &[a, b, d]),
            Gate::two(CY, 1, 0),
            Gate::two(CH, 0, 1),
            Gate::two(Swap, 0, 1),
            Gate::new(CSwap, &[2, 0, 1], &[]),
            Gate::new(CRz, &[0, 1], &[b]),
            Gate::new(CU1, &[1, 0], &[a]),
            Gate::new(CU3, &[0, 1], &[a, b, d]),
            Gate::new(Rzz, &[0, 1], &[d]),
        ];
        for g in cases {
            let n = g.qubits.iter().max().unwrap() + 1;
            let src = Circuit::new(n).with(g.clone());
            let out = transpile_to_basis(&src).unwrap();
            assert!(out.is_basis());
            let dist = unitary_of(&out).unwrap().distance_up_to_scalar(&unitary_of(&src).unwrap());
            assert!(dist <= 1e-10, "{g}: {dist}");
        }
    }
}
