import init, { band_raster, band_slice_radius, sigma_minus, retarded_impulse } from "./pkg/causalkit_web.js";

// maps data ranges onto a canvas, y up
function view(canvas, xr, yr) {
  const w = canvas.width, h = canvas.height;
  return {
    px: (x) => ((x - xr[0]) / (xr[1] - xr[0])) * w,
    py: (y) => h - ((y - yr[0]) / (yr[1] - yr[0])) * h,
    x: (px) => xr[0] + (px / w) * (xr[1] - xr[0]),
    y: (py) => yr[0] + ((h - py) / h) * (yr[1] - yr[0]),
  };
}

function axes(ctx, v, xr, yr) {
  ctx.strokeStyle = "#bbb";
  ctx.lineWidth = 1;
  ctx.beginPath();
  if (yr[0] < 0 && yr[1] > 0) { ctx.moveTo(0, v.py(0)); ctx.lineTo(ctx.canvas.width, v.py(0)); }
  if (xr[0] < 0 && xr[1] > 0) { ctx.moveTo(v.px(0), 0); ctx.lineTo(v.px(0), ctx.canvas.height); }
  ctx.stroke();
  ctx.fillStyle = "#555";
  ctx.font = "12px sans-serif";
  ctx.fillText("x", ctx.canvas.width - 14, v.py(0) - 6);
  ctx.fillText("t", v.px(0) + 6, 14);
}

function clickPos(canvas, ev) {
  const r = canvas.getBoundingClientRect();
  return [(ev.clientX - r.left) * (canvas.width / r.width), (ev.clientY - r.top) * (canvas.height / r.height)];
}

function bandPanel() {
  const canvas = document.getElementById("band");
  const ctx = canvas.getContext("2d");
  const slider = document.getElementById("band-t");
  const out = document.getElementById("band-out");
  const xr = [-3, 3], yr = [-0.5, 1.7];
  const v = view(canvas, xr, yr);
  const cols = canvas.width / 2, rows = canvas.height / 2;
  const px = band_raster(cols, rows, xr[1], yr[0], yr[1]);
  const img = new ImageData(cols, rows);
  px.forEach((m, i) => {
    img.data.set(m ? [74, 122, 181, 255] : [255, 255, 255, 255], 4 * i);
  });
  const layer = document.createElement("canvas");
  layer.width = cols;
  layer.height = rows;
  layer.getContext("2d").putImageData(img, 0, 0);

  function draw() {
    const t = Number(slider.value);
    ctx.imageSmoothingEnabled = false;
    ctx.drawImage(layer, 0, 0, canvas.width, canvas.height);
    axes(ctx, v, xr, yr);
    ctx.strokeStyle = "#888";
    ctx.beginPath();
    ctx.moveTo(0, v.py(t));
    ctx.lineTo(canvas.width, v.py(t));
    ctx.stroke();
    const r = band_slice_radius(t);
    if (r >= 0) {
      ctx.strokeStyle = "#ef6c00";
      ctx.lineWidth = 4;
      ctx.beginPath();
      ctx.moveTo(v.px(-r), v.py(t));
      ctx.lineTo(v.px(r), v.py(t));
      ctx.stroke();
      out.textContent = `t = ${t.toFixed(2)}: slice within |x| <= ${r.toFixed(4)}`;
    } else {
      out.textContent = `t = ${t.toFixed(2)}: empty slice`;
    }
  }
  slider.addEventListener("input", draw);
  draw();
}

function sigmaPanel() {
  const canvas = document.getElementById("sigma");
  const ctx = canvas.getContext("2d");
  const out = document.getElementById("sigma-out");
  const xr = [-5, 5], yr = [-4, 1];
  const v = view(canvas, xr, yr);
  const xs = Float64Array.from({ length: canvas.width + 1 }, (_, i) => v.x(i));
  let events = [];

  function draw() {
    ctx.fillStyle = "white";
    ctx.fillRect(0, 0, canvas.width, canvas.height);
    axes(ctx, v, xr, yr);
    const f = sigma_minus(Float64Array.from(events), xs);
    ctx.strokeStyle = "#2e7d32";
    ctx.lineWidth = 2;
    ctx.beginPath();
    f.forEach((h, i) => (i ? ctx.lineTo(i, v.py(h)) : ctx.moveTo(i, v.py(h))));
    ctx.stroke();
    ctx.fillStyle = "#c0392b";
    for (let k = 0; k < events.length; k += 2) {
      ctx.beginPath();
      ctx.arc(v.px(events[k + 1]), v.py(events[k]), 4, 0, 2 * Math.PI);
      ctx.fill();
    }
    out.textContent = `${events.length / 2} events`;
  }
  canvas.addEventListener("click", (ev) => {
    const [x, y] = clickPos(canvas, ev);
    events.push(v.y(y), v.x(x));
    draw();
  });
  document.getElementById("sigma-clear").addEventListener("click", () => {
    events = [];
    draw();
  });
  draw();
}

function wavePanel() {
  const canvas = document.getElementById("wave");
  const ctx = canvas.getContext("2d");
  const slider = document.getElementById("wave-lambda");
  const out = document.getElementById("wave-out");
  const steps = 120, jMax = 160;
  const cols = 2 * jMax + 1, rows = steps + 1;
  let source = [10, 0];

  function draw() {
    const lambda = Number(slider.value);
    let u;
    try {
      u = retarded_impulse(lambda, steps, jMax, source[0], source[1]);
    } catch (e) {
      out.textContent = String(e.message ?? e);
      return;
    }
    let max = 0;
    for (const x of u) max = Math.max(max, Math.abs(x));
    const img = new ImageData(cols, rows);
    for (let n = 0; n < rows; n++) {
      for (let c = 0; c < cols; c++) {
        const val = u[n * cols + c];
        const a = max > 0 ? Math.sqrt(Math.abs(val) / max) : 0;
        const rgb = val > 0 ? [192, 57, 43] : [41, 98, 255];
        const i = 4 * ((rows - 1 - n) * cols + c);
        img.data.set([255 - a * (255 - rgb[0]), 255 - a * (255 - rgb[1]), 255 - a * (255 - rgb[2]), 255], i);
      }
    }
    const layer = document.createElement("canvas");
    layer.width = cols;
    layer.height = rows;
    layer.getContext("2d").putImageData(img, 0, 0);
    ctx.imageSmoothingEnabled = false;
    ctx.drawImage(layer, 0, 0, canvas.width, canvas.height);
    out.textContent = `impulse at n = ${source[0]}, j = ${source[1]}; lambda = ${lambda}; max |u| = ${max.toFixed(4)}`;
  }
  canvas.addEventListener("click", (ev) => {
    const [x, y] = clickPos(canvas, ev);
    const j = Math.round((x / canvas.width) * (cols - 1)) - jMax;
    const n = Math.round(((canvas.height - y) / canvas.height) * (rows - 1));
    source = [Math.min(Math.max(n, 1), steps - 1), j];
    draw();
  });
  slider.addEventListener("input", draw);
  draw();
}

await init();
bandPanel();
sigmaPanel();
wavePanel();
