"""Write the fixture manifests under manifests/."""
from pathlib import Path

from almostcx import fixtures as fx
from almostcx.manifest import dump_manifest, manifest_for

OUT = Path(__file__).resolve().parent.parent / "manifests"


def build():
    top3 = fx.top_form(3)
    xi = top3 ^ fx.Form.coframe(1, True)
    return {
        "F0_n2": manifest_for(fx.torus(2), max_degree=None),
        "F0_n3": manifest_for(fx.torus(3)),
        "F2": manifest_for(fx.f2(), {"phi_t": fx.phi_t()},
                           {"Omega": top3, "Xi": xi}),
        "F3": manifest_for(fx.f3()),
        "KT": manifest_for(fx.kodaira_thurston(), forms={"Omega": fx.top_form(2)}),
        "KT_int": manifest_for(fx.kodaira_thurston_integrable(), forms={"Omega": fx.top_form(2)}),
        "solvable": manifest_for(fx.solvable_holomorphic(), {"phi": fx.solvable_phi()},
                                 {"Omega": top3}),
        "sign_witness": manifest_for(fx.sign_witness(), {"phi": fx.sign_witness_phi()},
                                     {"Omega": top3}),
        "broken": manifest_for(fx.broken_d_squared()),
    }


def main():
    OUT.mkdir(exist_ok=True)
    for name, m in build().items():
        (OUT / f"{name}.json").write_text(dump_manifest(m), encoding="utf-8")
        print(OUT / f"{name}.json")


if __name__ == "__main__":
    main()
