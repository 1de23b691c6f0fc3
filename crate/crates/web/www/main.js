import init, { classify, harmonic_decompose, chi_f } from "./pkg/pcentral_web.js";

const $ = (id) => document.getElementById(id);

function show(out, text) {
  const value = JSON.parse(text);
  out.classList.toggle("err", value.ok === false);
  out.textContent = JSON.stringify(value, null, 2);
}

function bind(button, out, call) {
  $(button).addEventListener("click", () => {
    $(out).textContent = "running...";
    // Let the status paint before the synchronous wasm call blocks the thread.
    setTimeout(() => show($(out), call()), 0);
  });
}

await init();

bind("cl-run", "cl-out", () =>
  classify($("cl-poly").value, Number($("cl-n").value), BigInt($("cl-seed").value || 0)));
bind("hd-run", "hd-out", () =>
  harmonic_decompose(Number($("hd-n").value), $("hd-entries").value));
bind("cf-run", "cf-out", () =>
  chi_f($("cf-poly").value, Number($("cf-n").value), $("cf-base").value, BigInt($("cf-seed").value || 0)));
