// Browser entry point. The service base URL comes from the host page via
// data-api-base on the mount node; empty means same-origin.

import { ApiClient } from "./api.js"
import { App } from "./app.js"

const root = document.getElementById("app")
if (root) {
  const base = root.dataset.apiBase ?? ""
  void new App(root, new ApiClient(base)).start()
}
