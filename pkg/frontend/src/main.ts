import { mount } from "./app";
import "./style.css";

mount(document.getElementById("app")!);
