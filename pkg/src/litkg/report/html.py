"""Self-contained HTML network views.

The force-directed layout is computed here (seeded Fruchterman-Reingold,
repulsion evaluated in row blocks so memory stays flat) and embedded in the
file together with the node/edge data; the inline script only renders SVG
and adds pan/zoom, so a view is one file, needs no server, and is
byte-reproducible for a fixed seed.
"""

from __future__ import annotations

import html as html_escape
import json

import numpy as np

from ..errors import RenderCapError
from ..model import KnowledgeGraph
from ..validate import Overlay

CATEGORY_COLORS = {
    "gene": "#4c78a8",
    "disease": "#e45756",
    "chemical": "#54a24b",
    "variant": "#f58518",
}

EDGE_CLASS_COLORS = {
    "green": "#2ca02c",
    "red": "#d62728",
    "blue": "#1f3f8f",
    "path": "#7ec8e3",
}

KIND_COLORS = {
    "positive_correlation": "#2ca02c",
    "negative_correlation": "#d62728",
    "association": "#9a9a9a",
    "cotreatment": "#9467bd",
    "bind": "#8c564b",
    "drug_interaction": "#bcbd22",
    "multitype": "#222222",
}

DEFAULT_RENDER_CAP = 5000


def force_layout(
    node_ids: list[str],
    edges: list[tuple[str, str]],
    seed: int = 0,
    iterations: int = 60,
    block: int = 256,
) -> dict[str, tuple[float, float]]:
    """Seeded Fruchterman-Reingold positions in the unit square."""
    n = len(node_ids)
    if n == 0:
        return {}
    index = {nid: i for i, nid in enumerate(node_ids)}
    rng = np.random.default_rng(seed)
    pos = rng.uniform(0.0, 1.0, size=(n, 2))
    if n == 1:
        return {node_ids[0]: (0.5, 0.5)}
    edge_idx = np.array([[index[a], index[b]] for a, b in edges], dtype=np.int64)
    k = 1.0 / np.sqrt(n)
    for it in range(iterations):
        disp = np.zeros((n, 2))
        for start in range(0, n, block):
            stop = min(start + block, n)
            delta = pos[start:stop, None, :] - pos[None, :, :]
            dist = np.sqrt((delta**2).sum(axis=2))
            np.maximum(dist, 1e-9, out=dist)
            disp[start:stop] += (delta / dist[:, :, None] * (k * k / dist)[:, :, None]).sum(axis=1)
        if len(edge_idx):
            delta = pos[edge_idx[:, 0]] - pos[edge_idx[:, 1]]
            dist = np.sqrt((delta**2).sum(axis=1))
            np.maximum(dist, 1e-9, out=dist)
            pull = delta / dist[:, None] * (dist * dist / k)[:, None]
            np.add.at(disp, edge_idx[:, 0], -pull)
            np.add.at(disp, edge_idx[:, 1], pull)
        length = np.sqrt((disp**2).sum(axis=1))
        np.maximum(length, 1e-9, out=length)
        temperature = 0.1 * (1.0 - it / iterations) + 1e-3
        pos += disp / length[:, None] * np.minimum(length, temperature)[:, None]
        pos = np.clip(pos, 0.0, 1.0)
    return {nid: (float(pos[i, 0]), float(pos[i, 1])) for nid, i in index.items()}


def _view_payload(source) -> tuple[list[dict], list[dict]]:
    if isinstance(source, KnowledgeGraph):
        nodes = [
            {"id": nid, "name": node.name, "category": node.category}
            for nid, node in sorted(source.nodes.items())
        ]
        edges = [
            {
                "source": a,
                "target": b,
                "color": KIND_COLORS[source.edge(a, b).kind_label],
                "label": source.edge(a, b).kind_label,
            }
            for a, b in sorted(source.edge_pairs())
        ]
        return nodes, edges
    if isinstance(source, Overlay):
        payload = source.to_dict()
        nodes = payload["nodes"]
        edges = [
            {
                "source": e["source"],
                "target": e["target"],
                "color": EDGE_CLASS_COLORS[e["edge_class"]],
                "label": e["edge_class"],
            }
            for e in payload["edges"]
        ]
        return nodes, edges
    raise TypeError(f"cannot render a {type(source).__name__}")


_TEMPLATE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8"/>
<title>{title}</title>
<style>
 body {{ font-family: sans-serif; margin: 0; background: #fcfcfc; }}
 header {{ padding: 8px 16px; }} h1 {{ font-size: 16px; margin: 4px 0; }}
 .legend span {{ margin-right: 14px; font-size: 12px; }}
 .legend i {{ display: inline-block; width: 10px; height: 10px; border-radius: 5px;
              margin-right: 4px; }}
 svg {{ display: block; width: 100vw; height: calc(100vh - 70px); cursor: grab; }}
 line {{ stroke-opacity: 0.55; }}
 circle {{ stroke: #fff; stroke-width: 0.7; }}
</style>
</head>
<body>
<header>
 <h1>{title}</h1>
 <div class="legend">{legend}</div>
</header>
<svg id="view" viewBox="0 0 1000 1000" preserveAspectRatio="xMidYMid meet"></svg>
<script type="application/json" id="graph-data">{data}</script>
<script>
(function () {{
  "use strict";
  var data = JSON.parse(document.getElementById("graph-data").textContent);
  var svg = document.getElementById("view");
  var NS = "http://www.w3.org/2000/svg";
  var pos = {{}};
  data.nodes.forEach(function (n) {{ pos[n.id] = [n.x * 960 + 20, n.y * 960 + 20]; }});
  data.edges.forEach(function (e) {{
    var line = document.createElementNS(NS, "line");
    line.setAttribute("x1", pos[e.source][0]); line.setAttribute("y1", pos[e.source][1]);
    line.setAttribute("x2", pos[e.target][0]); line.setAttribute("y2", pos[e.target][1]);
    line.setAttribute("stroke", e.color); line.setAttribute("stroke-width", "1");
    var t = document.createElementNS(NS, "title");
    t.textContent = e.source + " - " + e.target + " (" + e.label + ")";
    line.appendChild(t); svg.appendChild(line);
  }});
  data.nodes.forEach(function (n) {{
    var c = document.createElementNS(NS, "circle");
    c.setAttribute("cx", pos[n.id][0]); c.setAttribute("cy", pos[n.id][1]);
    c.setAttribute("r", "4"); c.setAttribute("fill", n.color);
    var t = document.createElementNS(NS, "title");
    t.textContent = n.name + " [" + n.category + "] " + n.id;
    c.appendChild(t); svg.appendChild(c);
  }});
  var vb = [0, 0, 1000, 1000], drag = null;
  function applyView() {{ svg.setAttribute("viewBox", vb.join(" ")); }}
  svg.addEventListener("wheel", function (ev) {{
    ev.preventDefault();
    var f = ev.deltaY > 0 ? 1.15 : 0.87;
    var cx = vb[0] + vb[2] / 2, cy = vb[1] + vb[3] / 2;
    vb[2] *= f; vb[3] *= f; vb[0] = cx - vb[2] / 2; vb[1] = cy - vb[3] / 2; applyView();
  }});
  svg.addEventListener("pointerdown", function (ev) {{ drag = [ev.clientX, ev.clientY]; }});
  svg.addEventListener("pointermove", function (ev) {{
    if (!drag) return;
    var scale = vb[2] / svg.clientWidth;
    vb[0] -= (ev.clientX - drag[0]) * scale; vb[1] -= (ev.clientY - drag[1]) * scale;
    drag = [ev.clientX, ev.clientY]; applyView();
  }});
  svg.addEventListener("pointerup", function () {{ drag = null; }});
}})();
</script>
</body>
</html>
"""


def emit_html_view(
    source: KnowledgeGraph | Overlay,
    path,
    seed: int = 0,
    render_cap: int = DEFAULT_RENDER_CAP,
    title: str = "network view",
    module_selector: tuple | None = None,
) -> str:
    """Write one self-contained HTML file for the graph or overlay.

    A graph over the render cap needs module_selector=(partition, node):
    the view then down-samples to that node's community, saying so in the
    title. Without a selector the cap is a hard error.
    """
    if (
        module_selector is not None
        and isinstance(source, KnowledgeGraph)
        and source.node_count > render_cap
    ):
        from ..analyze.communities import module_of

        partition, focus = module_selector
        module = module_of(source, partition, focus)
        title = f"{title} (community of {focus}, {module.node_count} of {source.node_count} nodes)"
        source = module
    nodes, edges = _view_payload(source)
    if len(nodes) > render_cap:
        raise RenderCapError(
            f"{len(nodes)} nodes exceed the render cap of {render_cap}; "
            "select a community first (module_of) or raise the cap"
        )
    layout = force_layout([n["id"] for n in nodes], [(e["source"], e["target"]) for e in edges], seed)
    for n in nodes:
        x, y = layout[n["id"]]
        n["x"] = round(x, 4)
        n["y"] = round(y, 4)
        n["color"] = CATEGORY_COLORS.get(n.get("category", ""), "#777777")
    legend_bits = [
        f'<span><i style="background:{color}"></i>{name}</span>'
        for name, color in CATEGORY_COLORS.items()
    ]
    seen_labels = {e["label"]: e["color"] for e in edges}
    legend_bits += [
        f'<span><i style="background:{color}"></i>{label}</span>'
        for label, color in sorted(seen_labels.items())
    ]
    document = _TEMPLATE.format(
        title=html_escape.escape(title),
        legend="".join(legend_bits),
        data=json.dumps({"nodes": nodes, "edges": edges}, ensure_ascii=False, sort_keys=True),
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(document)
    return str(path)
