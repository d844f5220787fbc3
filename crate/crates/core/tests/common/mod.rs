#![allow(dead_code)]

use elliptica::elliptic::{LatticeSumPolicy, SymmetricWp};
use elliptica::{Complex64, Lattice};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn square() -> Lattice {
    Lattice::square()
}

pub fn rectangular() -> Lattice {
    Lattice::new(c(1.0, 0.0), c(0.0, 2.0)).unwrap()
}

pub fn rhombic() -> Lattice {
    let e = Complex64::from_polar(1.0, std::f64::consts::PI / 6.0);
    Lattice::new(e, -e.conj()).unwrap()
}

pub fn test_tori() -> [(&'static str, Lattice); 3] {
    [("square", square()), ("rectangular", rectangular()), ("rhombic", rhombic())]
}

pub fn wp(l: Lattice) -> SymmetricWp {
    SymmetricWp::build(l, LatticeSumPolicy::default()).unwrap()
}
