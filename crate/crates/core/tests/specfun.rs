use harvest_core::specfun::*;
use num_complex::Complex64;
use proptest::prelude::*;

// Reference values from 50-digit arithmetic.
// (re, im, erf.re, erf.im, erfi.re, erfi.im, w.re, w.im)
const REF: &[[f64; 8]] = &[
    [1.5, 0.5, 1.00760548622137025, 4.1697093665554598e-2, 1.62583504724468369, 3.38640533372765039, 1.96636032243581962e-1, 3.37720318346887946e-1],
    [0.7, -1.2, 1.82926135193153142, -6.39342772366131771e-1, 1.20243364016009934e-1, -1.06637001298033805, -8.91382176555385152e-1, 5.27731998192497201],
    [0.1, 0.05, 1.12742550989692025e-1, 5.59032309021448689e-2, 1.12930602514237125e-1, 5.6937577254555062e-2, 9.37089960846356398e-1, 1.02721183831815987e-1],
    [3.0, 2.0, 9.98963278856817269e-1, -1.15467243792906034e-5, 8.68731827147016314, -2.08294614276145684e+1, 9.2710766426443334e-2, 1.28316962228261575e-1],
    [-2.5, 0.3, -1.00001537742533876, 4.42774447632682456e-4, -2.61913950670409593e+1, 1.14494509474596577e+2, 3.82265062606852089e-2, -2.43042008530977581e-1],
    [5.5, -4.0, 9.99999956945655476e-1, -3.18151470131893336e-8, 1.04468565532869909e+5, 7.48230811063876734e+4, -4.9644423923778462e-2, 6.6785006185703391e-2],
    [0.0, 6.0, 0.0, 4.11275145582823871e+14, 0.0, 9.99999999999999978e-1, 9.27765678005383544e-2, 0.0],
    [12.0, 1.0, 1.0, 9.20377202580600236e-56, 2.07313217041755772e+60, -5.6038650111684211e+60, 3.93153513635013102e-3, 4.68496691610386613e-2],
    [-0.4, -9.5, -7.61994728245885357e+37, -2.32827125823687541e+37, -4.32015156620386125e-41, -1.0, 6.71031571214335398e+38, -2.58499190183932469e+39],
    [25.0, -3.0, 1.0, -4.37934471841946519e-56, 4.57819563548652154e+265, 5.9635276915940662e+265, -2.67588712637017677e-3, 2.22638068856109415e-2],
    [0.001, 0.002, 1.1283833044904183e-3, 2.25675908643951541e-3, 1.1283750297098596e-3, 2.2567575819339593e-3, 9.97746240157814833e-1, 1.12438742988840091e-3],
    [2.2, 2.2, 1.09882007335761788, -1.50715182074257661e-1, -1.50715182074257661e-1, 1.09882007335761788, 1.3366861505419896e-1, 1.20884963314607467e-1],
    [-2.834146521523443, -3.944976159613879, -5.98205799699191628e+1, 2.09654065303515936e+2, 5.1145300520331155e-5, -1.0000347683373305, -3.4755299245485309e+3, 1.3484569625572997e+3],
    [-8.770065775510671, -4.292082960095557, -1.0, -7.52324383578991012e-28, -1.23070156533929942e+24, 7.95569670380671907e+23, -2.57004388442507761e-2, -5.1959009006872338e-2],
    [5.3418308500108465, -6.006495296037212, 7.63824102103651839e+1, -1.09035743587065943e+2, 3.28173788435448391e-5, -1.00001741868631471, 8.6513185026997631e+2, 3.67386757735647813e+3],
    [0.8690345599797268, 0.04063090499625697, 7.81689384457198736e-1, 2.15377859916133938e-2, 1.29168356339138942, 9.74316557234892424e-2, 4.66663815149488765e-1, 5.76482438097673086e-1],
    [0.5142578769020247, -0.22775387262079697, 5.56545692211011814e-1, -1.98881113327953827e-1, 5.97719576688382475e-1, -3.26131892001383061e-1, 9.3071214782093832e-1, 7.18912819396391123e-1],
    [-0.8821878545071316, -0.5654158955916655, -9.45483439738474604e-1, -2.7133052529988763e-1, -7.79015422243014946e-1, -1.07252228868212399, 2.96783659939481903e-1, -1.36791023804557837],
    [-2.95673485397209, 5.639719934722431, -9.19143377977132564e+8, 1.19966055934514958e+8, -5.67202535830304252e-12, 1.00000000000628568, 7.8309319145390106e-2, -4.00825186133297452e-2],
    [-0.3107774050428867, -1.8308401516863617, -7.78791642687749903, -6.05197364212952824, -1.00550860818103778e-2, -9.96944971823367359e-1, 2.14821076027414208e+1, -4.71147124670735839e+1],
    [-8.908068098146808, 3.03687729236596, -1.0, -1.77720231593094213e-32, 1.61227867989317556e+29, -6.18417127426505699e+28, 1.96314214822300977e-2, -5.69265931672421039e-2],
    [6.895653378240931, -5.233136963651149, 1.0000000000965106, 6.02353803814711456e-11, -2.7555300852566939e+7, -2.51852458407046429e+7, -3.98033483614833945e-2, 5.17485400257037231e-2],
    [-14.021042094474753, -4.225166932101241, -1.0, -1.42776547319412507e-55, -6.01598133296314734e+75, 1.51159577369337017e+76, -1.11860455599964164e-2, -3.69463762022457079e-2],
    [3.1717716803187175, -12.480291896576233, -3.06714577580901636e+61, 7.69871593219237025e+61, 1.4728874596177432e-55, -1.0, -3.04979219233061984e+63, -2.22111048958495038e+63],
    [-1.597753517576081, -1.4592216208743072, -9.06781366266888193e-1, 1.37059000678457817e-1, 3.04880180568496907e-1, -7.52841266685923734e-1, -2.56093083481594861e-1, 1.13642131586100935],
    [-1.8676943422060313, 4.233550625583017, -7.41325864207243728e+4, -2.17720298320449793e+5, 3.12909135608293164e-8, 1.00000005653761732, 1.10570280818696011e-1, -4.66827631995358007e-2],
    [2.3623262141084678, 1.3298008678853073, 9.96038715473397037e-1, 1.97965202523914338e-3, 8.08744433378887425, -4.29535528837067989, 1.16962518614877677e-1, 1.78765476030844027e-1],
    [6.664993624694571, -6.886596013795275, 1.09767902882937933, 1.18215328600055686, -2.90190544824523115e-3, -1.00033558980033106, -3.10667395795108664e+1, -2.56718229165659187e+1],
    [-7.585019821922811, -3.1579857879689803, -1.0, 1.39365575939803889e-22, 2.8923872650369835e+19, 1.16521434591421439e+19, -2.68749821534647163e-2, -6.35805299927919885e-2],
    [-0.24424558520829584, -0.8600066702698309, -5.49892886021962504e-1, -1.15757730653685772, -1.30232395832837267e-1, -8.04155549461585705e-1, 3.14653819878142585, -1.68708813759050448],
    [9.167873351333807, -4.48469909834571, 1.0, -7.91964472437398102e-30, 3.23390064699356566e+26, -2.92169729236531729e+25, -2.45537600406163063e-2, 4.97089361752674392e-2],
    [4.047502777806133, 2.4130108394274217, 9.99998894663437909e-1, 2.86536445598924368e-6, 4.6245217570212588e+3, 5.83722350397957568e+2, 6.40687977166511306e-2, 1.02547837944204734e-1],
    [2.091164874995684, -6.468125480969135, 1.55952339839753991e+15, 4.51950728772865742e+13, 3.50225883399447679e-18, -1.0, -1.27183311922392928e+16, 3.50271990022262476e+16],
    [3.7536898884329797, 11.30900231545042, 3.05413770573941783e+47, -1.22341153193889129e+48, -6.8664102495291395e-52, 1.0, 4.48422270271640264e-2, 1.4780751548665809e-2],
    [3.2683719504526483, 1.6504374470147671, 9.99987806217945559e-1, -5.12519800479886871e-5, -2.92449955709168014e+2, -3.40560498165287641e+2, 7.55351073275010344e-2, 1.37936416292500656e-1],
    [-5.575349434088491, 5.565746706539728, -9.35662639809416185e-1, 4.24582042365477906e-4, -6.63177884990317151e-4, 9.20311509058484172e-1, 5.09955575685688112e-2, -5.02675990210499444e-2],
];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn erf_matches_reference() {
    for row in REF {
        let z = c(row[0], row[1]);
        let got = erf_complex(z).unwrap();
        assert!(rel(got, c(row[2], row[3])) < 1e-13, "erf({z}) = {got}");
    }
}

#[test]
fn erfi_matches_reference() {
    for row in REF {
        let z = c(row[0], row[1]);
        let got = erfi_complex(z).unwrap();
        assert!(rel(got, c(row[4], row[5])) < 1e-13, "erfi({z}) = {got}");
    }
}

#[test]
fn faddeeva_matches_reference() {
    for row in REF {
        let z = c(row[0], row[1]);
        let got = faddeeva(z).unwrap();
        assert!(rel(got, c(row[6], row[7])) < 1e-13, "w({z}) = {got}");
    }
}

#[test]
fn erf_and_erfi_vanish_at_origin() {
    assert_eq!(erf_complex(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    assert_eq!(erfi_complex(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
}

#[test]
fn erfi_identity_sample() {
    let z = c(0.7, -1.2);
    let lhs = erfi_complex(z).unwrap() + Complex64::i() * erf_complex(Complex64::i() * z).unwrap();
    assert!(lhs.norm() < 1e-13);
}

#[test]
fn erf_agrees_with_real_erf() {
    for k in 0..=400 {
        let x = -6.0 + 0.03 * k as f64;
        let got = erf_complex(c(x, 0.0)).unwrap();
        let want = libm::erf(x);
        assert!(got.im == 0.0 || got.im.abs() < 1e-300);
        assert!((got.re - want).abs() <= 1e-14 * want.abs().max(1e-300) + 1e-300, "x = {x}");
    }
}

#[test]
fn non_finite_input_is_domain_error() {
    assert!(erf_complex(c(f64::INFINITY, 0.0)).is_err());
    assert!(erfi_complex(c(0.0, f64::NAN)).is_err());
}

#[test]
fn legendre_reference_values() {
    assert!((legendre_p(100, 0.3).unwrap() - 0.057127392202801418522).abs() < 1e-12 * 0.0572);
    assert!((legendre_p(37, -0.71).unwrap() - 0.15096341505414179441).abs() < 1e-12 * 0.151);
    assert!((legendre_p(200, 0.999).unwrap() + 0.082286336961934999606).abs() < 1e-12 * 0.0823);
}

#[test]
fn legendre_endpoints() {
    for l in 0..=200 {
        assert_eq!(legendre_p(l, 1.0).unwrap(), 1.0);
    }
    assert_eq!(legendre_p(1, 0.37).unwrap(), 0.37);
}

proptest! {
    #[test]
    fn erf_is_odd(re in -20.0f64..20.0, im in -4.0f64..4.0) {
        let z = c(re, im);
        let a = erf_complex(z).unwrap();
        let b = erf_complex(-z).unwrap();
        prop_assert!((a + b).norm() <= 1e-14 * a.norm().max(1.0));
    }

    #[test]
    fn erf_reflects(re in -20.0f64..20.0, im in -4.0f64..4.0) {
        let z = c(re, im);
        let a = erf_complex(z.conj()).unwrap();
        let b = erf_complex(z).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-14 * a.norm().max(1.0));
    }

    #[test]
    fn erf_plus_erfc_is_one(re in -6.0f64..6.0, im in -6.0f64..6.0) {
        let z = c(re, im);
        let s = erf_complex(z).unwrap() + erfc_complex(z).unwrap();
        let scale = erf_complex(z).unwrap().norm().max(1.0);
        prop_assert!((s - 1.0).norm() <= 1e-12 * scale);
    }

    #[test]
    fn erfi_real_on_real_axis(x in -25.0f64..25.0) {
        let v = erfi_complex(c(x, 0.0)).unwrap();
        prop_assert!(v.im.abs() <= 1e-15 * v.re.abs().max(1e-300));
    }

    #[test]
    fn legendre_recurrence_residual(x in -1.0f64..=1.0) {
        let p = legendre_table(200, x);
        for l in 1..200 {
            let lf = l as f64;
            let res = (lf + 1.0) * p[l + 1] - (2.0 * lf + 1.0) * x * p[l] + lf * p[l - 1];
            prop_assert!(res.abs() < 1e-12);
        }
        for v in &p {
            prop_assert!(v.abs() <= 1.0 + 1e-14);
        }
    }
}
