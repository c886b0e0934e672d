// Browser bootstrap: canvas + preset menu + per-coefficient sliders.

import { ApiClient } from "./api.js"
import { renderScene, Ctx2D } from "./render.js"
import { ViewState, SLIDER_DENOMINATOR, rationalToNumber } from "./state.js"

async function boot(): Promise<void> {
    const canvas = document.getElementById("plane") as HTMLCanvasElement
    const ctx = canvas.getContext("2d") as unknown as Ctx2D
    const presetSelect = document.getElementById("preset") as HTMLSelectElement
    const sliders = document.getElementById("sliders") as HTMLDivElement
    const readout = document.getElementById("readout") as HTMLDivElement
    const indicator = document.getElementById("bif") as HTMLSpanElement
    const toggles = document.getElementById("toggles") as HTMLDivElement

    const api = new ApiClient("")
    const state = new ViewState(api)
    state.viewport.width = canvas.width
    state.viewport.height = canvas.height

    const redraw = () => {
        renderScene(state.scene, state, ctx)
        indicator.style.visibility = state.bifurcationIndicator ? "visible" : "hidden"
        readout.textContent = state.hover.text +
            (state.lastError ? `   [${state.lastError}]` : "")
    }

    const rebuildSliders = () => {
        sliders.innerHTML = ""
        if (!state.scene) return
        for (const [index, value] of Object.entries(state.scene.alpha)) {
            if (value === null) continue
            const row = document.createElement("div")
            const label = document.createElement("label")
            label.textContent = `a[${index}] = ${state.overrides[Number(index)] ?? value}`
            const slider = document.createElement("input")
            slider.type = "range"
            const center = Math.round(rationalToNumber(value) * SLIDER_DENOMINATOR)
            slider.min = String(center - 2 * SLIDER_DENOMINATOR)
            slider.max = String(center + 2 * SLIDER_DENOMINATOR)
            slider.value = String(center)
            slider.step = "1"
            slider.addEventListener("input", () => {
                const err = state.onSliderChange(Number(index), Number(slider.value))
                if (err) readout.textContent = err
                label.textContent = `a[${index}] = ${state.overrides[Number(index)]}`
            })
            row.appendChild(label)
            row.appendChild(slider)
            sliders.appendChild(row)
        }
    }

    for (const layer of ["TU", "TV", "TI", "regions", "singularities", "graph", "subdivision", "report"]) {
        const btn = document.createElement("button")
        btn.textContent = layer
        btn.addEventListener("click", () => {
            state.toggleLayer(layer)
            redraw()
        })
        toggles.appendChild(btn)
    }

    canvas.addEventListener("click", async (ev) => {
        const rect = canvas.getBoundingClientRect()
        await state.onCanvasClick(ev.clientX - rect.left, ev.clientY - rect.top)
        redraw()
    })
    canvas.addEventListener("mousemove", (ev) => {
        const rect = canvas.getBoundingClientRect()
        state.updateHover(ev.clientX - rect.left, ev.clientY - rect.top)
        redraw()
    })

    const names = await api.presets()
    for (const n of names) {
        const opt = document.createElement("option")
        opt.value = n
        opt.textContent = n
        presetSelect.appendChild(opt)
    }
    presetSelect.addEventListener("change", async () => {
        await state.loadPreset(presetSelect.value)
        rebuildSliders()
        redraw()
    })
    presetSelect.value = "autocatalator"
    await state.loadPreset("autocatalator")
    rebuildSliders()

    // re-render whenever a debounced refetch lands
    setInterval(redraw, 120)
}

void boot()
